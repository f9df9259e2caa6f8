#pragma once

#include "bloch.hpp"
#include "bounds.hpp"
#include "classifier.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "partitions.hpp"
#include "quantum_state.hpp"
#include "random_states.hpp"
#include "reference_states.hpp"
#include "surd.hpp"
#include "types.hpp"
