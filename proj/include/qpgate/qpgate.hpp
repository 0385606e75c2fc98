#pragma once

#include "qpgate/beam.hpp"
#include "qpgate/bloch.hpp"
#include "qpgate/constants.hpp"
#include "qpgate/design.hpp"
#include "qpgate/documents.hpp"
#include "qpgate/elements.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/fft.hpp"
#include "qpgate/field.hpp"
#include "qpgate/field_io.hpp"
#include "qpgate/math_util.hpp"
#include "qpgate/mode_state.hpp"
#include "qpgate/propagate.hpp"
#include "qpgate/schedule.hpp"
#include "qpgate/units.hpp"
