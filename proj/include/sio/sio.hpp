#pragma once

#include "sio/channel.hpp"
#include "sio/convertibility.hpp"
#include "sio/errors.hpp"
#include "sio/linalg.hpp"
#include "sio/semigroup.hpp"
#include "sio/typical_form.hpp"
