// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISNOMA_ERRORS_HPP
#define RISNOMA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace risnoma
{

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// NOMA power allocation violates (2^R_j - 1) * sum_{i>j} beta_i < beta_j.
class InfeasibleAllocation : public std::runtime_error
{
  public:
    InfeasibleAllocation(std::size_t rank, const std::string &what)
        : std::runtime_error(what), rank_(rank)
    {
    }

    /// 1-based rank j of the first violated SIC constraint.
    std::size_t rank() const noexcept { return rank_; }

  private:
    std::size_t rank_;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public std::runtime_error
{
  public:
    QuadratureError(double error_estimate, const std::string &what)
        : std::runtime_error(what), error_estimate_(error_estimate)
    {
    }

    double error_estimate() const noexcept { return error_estimate_; }

  private:
    double error_estimate_;
};

/// Progressive grid search produced no feasible power vector at the coarsest resolution.
class NoFeasibleAllocation : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Configuration parse or schema failure.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace risnoma

#endif
