#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <numbers>
#include <stdexcept>
#include <string>

namespace wpcyl {

// Extended precision for samples and operator matrices; see README "Precision".
using Real = long double;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using SpMat = Eigen::SparseMatrix<Real>;
using Triplet = Eigen::Triplet<Real>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok)
        throw DomainError(what);
}

} // namespace wpcyl
