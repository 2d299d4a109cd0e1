#pragma once

#include <functional>
#include <string>

#include "ridgewalk/linalg.hpp"

namespace ridgewalk {

// One iteration of a learning rule (or any discrete-time map), bundled with
// its Jacobian. Lyapunov machinery and the tree search only see this.
struct StepOperator {
    std::string name;
    double alpha = 0.0;  // learning rate; 0 for maps that are not optimizers
    std::function<Vec(const Vec&)> step;
    std::function<Mat(const Vec&)> jac;
};

} // namespace ridgewalk
