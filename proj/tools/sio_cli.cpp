// Command-line front end. Exit codes: 0 success, 1 domain or validation
// failure, 2 parse or usage failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sio/json_io.hpp"
#include "sio/selftest.hpp"
#include "sio/sio.hpp"

namespace {

using sio::OrderedJson;

constexpr std::uint64_t kDefaultSeed = 42;

struct Options {
  std::string input = "-";
  std::string output = "-";
  std::string theorem = "t1";
  std::uint64_t steps = 10;
  std::string state;
  std::string from;
  std::string to;
  std::string params;
  bool pauli_only = false;
  bool closed_form = false;
  std::uint64_t seed = kDefaultSeed;
};

// Usage problems that surface after option parsing.
class UsageError : public sio::ParseError {
 public:
  using sio::ParseError::ParseError;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

sio::ChannelDocument read_channel(const Options& opt) {
  return sio::parse_channel_document_text(read_input(opt.input));
}

const std::array<sio::BlochVector, 4> kResidualBasis{{{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}}};

int cmd_validate(const Options& opt, std::string& out) {
  const sio::KrausChannel ch = read_channel(opt).channel();
  const sio::ChannelClass cls = sio::classify(ch);
  OrderedJson j;
  j["class"] = sio::to_json(cls);
  if (cls.bistochastic_sio()) j["transfer_params"] = sio::to_json(sio::transfer_params(ch));
  out = sio::dump_json(j);
  return 0;
}

int cmd_decompose(const Options& opt, std::string& out) {
  if (opt.theorem != "t1" && opt.theorem != "t3") throw UsageError("--theorem must be t1 or t3");
  const sio::ChannelDocument doc = read_channel(opt);
  const sio::KrausChannel ch = doc.channel();
  const sio::TransferParams tp = sio::transfer_params(ch);
  const auto given = doc.typical_form();
  const sio::TypicalForm tf = given ? *given : sio::synthesize(tp);

  sio::MixtureDecomposition mix;
  OrderedJson coefficients = OrderedJson::object();
  if (opt.theorem == "t1") {
    mix = sio::decompose_pauli_phase(tf);
    coefficients = sio::to_json(mix);
  } else {
    try {
      mix = sio::decompose_pauli(tf);
    } catch (const sio::NotApplicableError& e) {
      throw sio::NotApplicableError(std::string("theorem 3 inapplicable: ") + e.what());
    }
    coefficients["c_I"] = mix.c_I;
    coefficients["c_id"] = mix.c_id;
    coefficients["c_s1"] = mix.c_s1;
    coefficients["c_s2"] = mix.c_s2;
    coefficients["c_s3"] = mix.c_s3;
  }

  double residual = 0.0;
  for (const auto& r : kResidualBasis) {
    const sio::DensityMatrix rho = sio::bloch_to_density(r);
    residual = std::max(residual, sio::max_abs_diff(sio::apply_mixture(mix, rho.matrix()), sio::apply(ch, rho).matrix()));
  }

  OrderedJson j;
  j["theorem"] = opt.theorem;
  j["typical_form"] = sio::to_json(tf);
  j["coefficients"] = coefficients;
  j["residual"] = residual;
  out = sio::dump_json(j);
  return 0;
}

int cmd_relaxing(const Options& opt, std::string& out) {
  const sio::TransferParams tp = sio::transfer_params(read_channel(opt).channel());
  out = sio::dump_json(sio::to_json(sio::relaxing_report(tp)));
  return 0;
}

int cmd_evolve(const Options& opt, std::string& out) {
  const sio::KrausChannel ch = read_channel(opt).channel();
  const sio::DensityMatrix rho0 = sio::bloch_to_density(sio::parse_bloch_csv(opt.state));
  std::optional<sio::TransferParams> tp;
  if (opt.closed_form) tp = sio::transfer_params(ch);
  const sio::Trajectory t = sio::trajectory(ch, rho0, opt.steps);
  std::ostringstream csv;
  sio::write_trajectory_csv(csv, t, tp ? &*tp : nullptr);
  out = csv.str();
  return 0;
}

int cmd_convert(const Options& opt, std::string& out) {
  sio::BlochVector from, to;
  bool pauli_only = opt.pauli_only;
  if (!opt.from.empty() || !opt.to.empty()) {
    if (opt.from.empty() || opt.to.empty()) throw UsageError("--from and --to must be given together");
    from = sio::parse_bloch_csv(opt.from);
    to = sio::parse_bloch_csv(opt.to);
  } else {
    const sio::Json doc = sio::parse_json_text(read_input(opt.input));
    if (!doc.is_object() || !doc.contains("from") || !doc.contains("to"))
      throw sio::ParseError("conversion document needs 'from' and 'to'");
    from = sio::parse_bloch(doc.at("from"));
    to = sio::parse_bloch(doc.at("to"));
    if (doc.contains("pauli_only")) {
      if (!doc.at("pauli_only").is_boolean()) throw sio::ParseError("pauli_only must be a boolean");
      pauli_only = pauli_only || doc.at("pauli_only").get<bool>();
    }
  }
  const bool ok = pauli_only ? sio::convertible_pauli_sio(from, to) : sio::convertible_sio(from, to);
  OrderedJson j;
  j["convertible"] = ok;
  j["pauli_only"] = pauli_only;
  j["region"] = sio::to_json(sio::image_region(from, pauli_only));
  out = sio::dump_json(j);
  return 0;
}

int cmd_synthesize(const Options& opt, std::string& out) {
  const sio::TransferParams tp = opt.params.empty() ? sio::parse_transfer_params(sio::parse_json_text(read_input(opt.input)))
                                                    : sio::parse_transfer_csv(opt.params);
  OrderedJson j;
  try {
    const sio::TypicalForm tf = sio::synthesize(tp);
    j["feasible"] = true;
    j["typical_form"] = sio::to_json(tf);
    j["residual"] = sio::max_abs_diff(sio::abcd(tf), tp);
  } catch (const sio::InfeasibleError& e) {
    j["feasible"] = false;
    j["violated_bound"] = e.what();
    out = sio::dump_json(j);
    std::cerr << "error: infeasible: " << e.what() << '\n';
    return 1;
  }
  out = sio::dump_json(j);
  return 0;
}

int cmd_selftest(const Options& opt, std::string& out) {
  const auto results = sio::selftest::run_all(opt.seed, sio::selftest::Counts::reduced());
  std::size_t passed = 0;
  for (const auto& r : results) {
    out += sio::selftest::format_line(r) + '\n';
    if (r.passed) ++passed;
  }
  out += "selftest seed=" + std::to_string(opt.seed) + ": " + std::to_string(passed) + "/" +
         std::to_string(results.size()) + " passed\n";
  return passed == results.size() ? 0 : 1;
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-qubit strictly incoherent operations: validation, decomposition, dynamics, convertibility"};
  app.require_subcommand(1);
  Options opt;

  const auto add_io = [&](CLI::App* sub, bool with_input) {
    if (with_input) sub->add_option("--input", opt.input, "channel/parameter document path, or - for stdin");
    sub->add_option("--output", opt.output, "output path, or - for stdout");
  };

  auto* validate = app.add_subcommand("validate", "classify a channel and print its transfer parameters");
  add_io(validate, true);

  auto* decompose = app.add_subcommand("decompose", "operator-sum decomposition over Pauli and phase operators");
  add_io(decompose, true);
  decompose->add_option("--theorem", opt.theorem, "t1: Pauli + phase operator mixture, t3: Pauli-only mixture")
      ->check(CLI::IsMember({"t1", "t3"}));

  auto* relaxing = app.add_subcommand("relaxing", "eigenvalue analysis and relaxing verdict");
  add_io(relaxing, true);

  auto* evolve = app.add_subcommand("evolve", "trajectory of Phi^n(rho) as CSV");
  add_io(evolve, true);
  evolve->add_option("--state", opt.state, "initial Bloch vector rx,ry,rz")->required();
  evolve->add_option("--steps", opt.steps, "number of channel applications");
  evolve->add_flag("--closed-form", opt.closed_form, "add closed-form prediction and deviation columns");

  auto* convert = app.add_subcommand("convert", "Bloch-vector convertibility under stochastic SIO");
  add_io(convert, true);
  convert->add_option("--from", opt.from, "source Bloch vector rx,ry,rz");
  convert->add_option("--to", opt.to, "target Bloch vector sx,sy,sz");
  convert->add_flag("--pauli-only", opt.pauli_only, "restrict to Pauli-form SIO");

  auto* synth = app.add_subcommand("synthesize", "typical-form parameters realizing given transfer parameters");
  add_io(synth, true);
  synth->add_option("--params", opt.params, "transfer parameters a,b,c,d,z (otherwise read from --input)");

  auto* selftest = app.add_subcommand("selftest", "randomized consistency checks at reduced sample counts");
  add_io(selftest, false);
  selftest->add_option("--seed", opt.seed, "random seed (default 42)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::string out;
    int code = 0;
    if (*validate) code = cmd_validate(opt, out);
    else if (*decompose) code = cmd_decompose(opt, out);
    else if (*relaxing) code = cmd_relaxing(opt, out);
    else if (*evolve) code = cmd_evolve(opt, out);
    else if (*convert) code = cmd_convert(opt, out);
    else if (*synth) code = cmd_synthesize(opt, out);
    else if (*selftest) code = cmd_selftest(opt, out);
    write_output(opt.output, out);
    return code;
  } catch (const sio::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
