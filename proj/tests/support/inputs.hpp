// Random type-correct arguments for IR functions.
#pragma once

#include "irenergy/interp/value.hpp"
#include "irenergy/ir/ir.hpp"

#include "testing.hpp"

#include <map>
#include <string>
#include <vector>

namespace irenergy::testing {

struct InputOptions {
  long max_size = 12;      // integer parameters are drawn from 0..max_size
  long max_element = 5;    // array elements from -max_element..max_element
  int extra_length = 2;    // arbitrary-length arrays hold sum(ints) + 3 + 0..extra_length
  double short_arrays = 0; // probability of a random (possibly too short) length
};

interp::ConcreteValue random_value(Rng& rng, const ir::TypePtr& t, hcir::TypeNamer& namer,
                                   std::size_t length, long max_element);

std::vector<interp::ConcreteValue> random_inputs(Rng& rng, const ir::Module& m,
                                                 const ir::Function& f,
                                                 const InputOptions& opts = {});

/// Arguments with integer parameters named in `sizes` set to that value (the
/// rest drawn as in random_inputs) and arrays long enough for every size.
std::vector<interp::ConcreteValue> sized_inputs(Rng& rng, const ir::Module& m,
                                                const ir::Function& f,
                                                const std::map<std::string, long>& sizes,
                                                long max_element = 5);

} // namespace irenergy::testing
