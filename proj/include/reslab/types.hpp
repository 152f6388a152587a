#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>
#include <Eigen/Dense>

namespace reslab {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr Complex I1{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

// Error taxonomy: every module failure carries a category tag so the
// harness can surface it with a remediation hint.
class ReslabError : public std::runtime_error {
public:
  ReslabError(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

private:
  std::string category_;
};

inline void require(bool cond, const std::string& category, const std::string& msg) {
  if (!cond) throw ReslabError(category, msg);
}

}  // namespace reslab
