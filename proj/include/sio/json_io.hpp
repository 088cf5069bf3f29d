#pragma once

// JSON documents: complex numbers are [re, im], matrices are row-major 2x2
// nested arrays of such pairs. Output goes through dump_json, which keeps key
// insertion order and prints every float with 17 significant digits so that
// identical inputs give byte-identical output.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sio/channel.hpp"
#include "sio/convertibility.hpp"
#include "sio/errors.hpp"
#include "sio/format.hpp"
#include "sio/linalg.hpp"
#include "sio/semigroup.hpp"
#include "sio/typical_form.hpp"

namespace sio {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Parsing

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline double parse_number(const Json& j, std::string_view what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline Complex parse_complex(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be a [re, im] pair");
  return {parse_number(j[0], "real part"), parse_number(j[1], "imaginary part")};
}

inline ComplexMat2 parse_matrix(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2)
    throw ParseError("matrix must be a 2x2 nested array");
  try {
    return {parse_complex(j[0][0]), parse_complex(j[0][1]), parse_complex(j[1][0]), parse_complex(j[1][1])};
  } catch (const NonFiniteError& e) {
    throw ParseError(e.what());
  }
}

inline BlochVector parse_bloch(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("Bloch vector must be [rx, ry, rz]");
  return {parse_number(j[0], "rx"), parse_number(j[1], "ry"), parse_number(j[2], "rz")};
}

/// Comma-separated list of exactly `count` numbers, e.g. "0.5,0,1".
inline std::vector<double> parse_number_list(std::string_view text, std::size_t count) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string field(text.substr(start, comma - start));
    try {
      std::size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw ParseError("cannot parse '" + field + "' as a number");
    }
    start = comma + 1;
  }
  if (values.size() != count)
    throw ParseError("expected " + std::to_string(count) + " comma-separated numbers, got " +
                     std::to_string(values.size()));
  return values;
}

inline BlochVector parse_bloch_csv(std::string_view text) {
  const auto v = parse_number_list(text, 3);
  return {v[0], v[1], v[2]};
}

inline TransferParams parse_transfer_csv(std::string_view text) {
  const auto v = parse_number_list(text, 5);
  return {v[0], v[1], v[2], v[3], v[4]};
}

struct BuiltinSpec {
  std::string name;
  double q = 0.0;
  std::optional<double> theta;
};

/// Exactly one of "kraus", "typical_form" or "builtin".
struct ChannelDocument {
  std::variant<std::vector<ComplexMat2>, TypicalForm, BuiltinSpec> source;

  KrausChannel channel() const {
    if (const auto* k = std::get_if<std::vector<ComplexMat2>>(&source)) return KrausChannel(*k);
    if (const auto* tf = std::get_if<TypicalForm>(&source)) return to_kraus(*tf);
    const auto& b = std::get<BuiltinSpec>(source);
    return builtin(b.name, b.q, b.theta);
  }

  std::optional<TypicalForm> typical_form() const {
    if (const auto* tf = std::get_if<TypicalForm>(&source)) return *tf;
    return std::nullopt;
  }
};

inline TypicalForm parse_typical_form(const Json& j) {
  if (!j.is_object()) throw ParseError("typical_form must be an object");
  if (!j.contains("a") || !j.contains("b1") || !j.contains("b2"))
    throw ParseError("typical_form needs keys a, b1, b2");
  const Json& a = j.at("a");
  if (!a.is_array() || a.size() != 4) throw ParseError("typical_form.a must hold four numbers");
  return {parse_number(a[0], "a1"), parse_number(a[1], "a2"), parse_number(a[2], "a3"), parse_number(a[3], "a4"),
          parse_complex(j.at("b1")), parse_complex(j.at("b2"))};
}

inline ChannelDocument parse_channel_document(const Json& j) {
  if (!j.is_object()) throw ParseError("channel document must be a JSON object");
  const int sources = static_cast<int>(j.contains("kraus")) + static_cast<int>(j.contains("builtin")) +
                      static_cast<int>(j.contains("typical_form"));
  if (sources != 1) throw ParseError("channel document must contain exactly one of kraus, builtin, typical_form");

  if (j.contains("kraus")) {
    const Json& list = j.at("kraus");
    if (!list.is_array() || list.empty()) throw ParseError("kraus must be a non-empty array of matrices");
    std::vector<ComplexMat2> ops;
    for (const auto& m : list) ops.push_back(parse_matrix(m));
    return {ops};
  }
  if (j.contains("typical_form")) return {parse_typical_form(j.at("typical_form"))};

  const Json& b = j.at("builtin");
  if (!b.is_object() || !b.contains("name") || !b.at("name").is_string() || !b.contains("q"))
    throw ParseError("builtin needs a string name and a number q");
  BuiltinSpec spec{b.at("name").get<std::string>(), parse_number(b.at("q"), "q"), std::nullopt};
  if (b.contains("theta")) spec.theta = parse_number(b.at("theta"), "theta");
  return {spec};
}

inline ChannelDocument parse_channel_document_text(std::string_view text) {
  return parse_channel_document(parse_json_text(text));
}

inline TransferParams parse_transfer_params(const Json& j) {
  const Json& body = j.is_object() && j.contains("transfer_params") ? j.at("transfer_params") : j;
  if (!body.is_object()) throw ParseError("transfer_params must be an object");
  for (const char* key : {"a", "b", "c", "d", "z"})
    if (!body.contains(key)) throw ParseError(std::string("transfer_params is missing '") + key + "'");
  return {parse_number(body.at("a"), "a"), parse_number(body.at("b"), "b"), parse_number(body.at("c"), "c"),
          parse_number(body.at("d"), "d"), parse_number(body.at("z"), "z")};
}

// ---------------------------------------------------------------------------
// Serialization

inline OrderedJson to_json(Complex z) { return OrderedJson::array({z.real(), z.imag()}); }

inline OrderedJson to_json(const ComplexMat2& m) {
  return OrderedJson::array({OrderedJson::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                             OrderedJson::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

inline OrderedJson to_json(const BlochVector& v) { return OrderedJson::array({v.rx, v.ry, v.rz}); }

inline OrderedJson to_json(const ChannelClass& c) {
  OrderedJson j;
  j["trace_preserving"] = c.trace_preserving;
  j["incoherent"] = c.incoherent;
  j["strictly_incoherent"] = c.strictly_incoherent;
  j["bistochastic"] = c.bistochastic;
  return j;
}

inline OrderedJson to_json(const TransferParams& tp) {
  OrderedJson j;
  j["a"] = tp.a;
  j["b"] = tp.b;
  j["c"] = tp.c;
  j["d"] = tp.d;
  j["z"] = tp.z;
  return j;
}

inline OrderedJson to_json(const TypicalForm& tf) {
  OrderedJson j;
  j["a"] = OrderedJson::array({tf.a1(), tf.a2(), tf.a3(), tf.a4()});
  j["b1"] = to_json(tf.b1());
  j["b2"] = to_json(tf.b2());
  return j;
}

inline OrderedJson to_json(const MixtureDecomposition& m) {
  OrderedJson j = OrderedJson::object();
  for (const auto& [name, value] : m.named()) j[std::string(name)] = value;
  return j;
}

inline OrderedJson to_json(const RelaxingReport& r) {
  OrderedJson j;
  j["lambda1"] = to_json(r.lambda1);
  j["lambda2"] = to_json(r.lambda2);
  j["mod1"] = r.mod1;
  j["mod2"] = r.mod2;
  j["z"] = r.z;
  j["b1b2_nonzero"] = r.b1b2_nonzero;
  j["relaxing"] = r.relaxing;
  j["case"] = std::string(to_string(r.spectrum));
  return j;
}

inline OrderedJson to_json(const ImageRegion& region) {
  OrderedJson j;
  if (region.kind == ImageRegion::Kind::Cylinder) {
    j["kind"] = "cylinder";
    j["radius"] = region.radius;
    j["half_height"] = region.half_height;
  } else {
    j["kind"] = "cuboid";
    j["half_extents"] = OrderedJson::array({region.half_extents[0], region.half_extents[1], region.half_extents[2]});
  }
  return j;
}

namespace detail {
inline void dump_into(std::string& out, const OrderedJson& j, int indent, int depth) {
  const auto newline = [&](int level) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case OrderedJson::value_t::number_float: {
      const double v = j.get<double>();
      // -0 prints as 0.
      out += !std::isfinite(v) ? "null" : v == 0.0 ? "0" : format_g17(v);
      return;
    }
    case OrderedJson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) newline(depth + 1);
        dump_into(out, e, indent, depth + 1);
        first = false;
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case OrderedJson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        newline(depth + 1);
        out += OrderedJson(key).dump();
        out += ": ";
        dump_into(out, value, indent, depth + 1);
        first = false;
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}
}  // namespace detail

inline std::string dump_json(const OrderedJson& j, int indent = 2) {
  std::string out;
  detail::dump_into(out, j, indent, 0);
  out += '\n';
  return out;
}

}  // namespace sio
