#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>

namespace signedcrowd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical thresholds shared by every module.
namespace tol {
inline constexpr double kEig = 1e-9;         // eigenpair residuals, normalizations
inline constexpr double kGap = 1e-8;         // strict dominance
inline constexpr double kRow = 1e-10;        // Laplacian row sums
inline constexpr double kStochastic = 1e-6;  // near-stochastic acceptance band
inline constexpr double kClassify = 1e-7;    // boundary band, mean accuracy (relative)
inline constexpr double kRelEigen = 1e-10;   // kernel / PSD slack, times lambda_max
inline constexpr double kMaxCondition = 1e12;
}  // namespace tol

/// Square signed weight matrix, n >= 2, all entries finite.
class InteractionMatrix {
 public:
  explicit InteractionMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return m_; }
  Index size() const noexcept { return m_.rows(); }
  bool has_negative_entry() const;

 private:
  Matrix m_;
};

/// Signed Laplacian with L v = 0 for a +-1 vector v: v = 1 for L = D - A,
/// a mixed signature for a gauge-transformed L_b = Xi L Xi.
class SignedLaplacian {
 public:
  explicit SignedLaplacian(Matrix entries);

  const Matrix& entries() const noexcept { return m_; }
  Index size() const noexcept { return m_.rows(); }
  /// The +-1 kernel vector, first entry of largest magnitude positive.
  const Vector& kernel_signature() const noexcept { return kernel_; }

 private:
  Matrix m_;
  Vector kernel_;
};

/// A vector with entries in {-1, +1}.
class Signature {
 public:
  explicit Signature(Vector values);
  static Signature ones(Index n);

  const Vector& values() const noexcept { return v_; }
  Index size() const noexcept { return v_.size(); }
  bool is_all_positive() const;
  Matrix diagonal() const { return v_.asDiagonal(); }
  double sum() const { return v_.sum(); }
  Signature flipped() const { return Signature(-v_); }

 private:
  Vector v_;
};

/// Stubbornness coefficients, 0 <= theta_i < 1.
class StubbornnessProfile {
 public:
  explicit StubbornnessProfile(Vector theta);

  const Vector& values() const noexcept { return theta_; }
  Index size() const noexcept { return theta_.size(); }
  bool all_zero() const { return (theta_.array() == 0.0).all(); }
  Matrix diagonal() const { return theta_.asDiagonal(); }

 private:
  Vector theta_;
};

enum class Dynamics { kDeGroot, kSFJ, kConcatSFJ };
enum class TimeDomain { kDiscrete, kContinuous };
enum class Partite { kUnipartite, kBipartite };
enum class Aggregator { kPopulation, kBipartition };

struct ModelKind {
  Dynamics dynamics = Dynamics::kDeGroot;
  TimeDomain time = TimeDomain::kDiscrete;
  Partite partite = Partite::kUnipartite;
};

std::string_view to_string(Dynamics d);
std::string_view to_string(TimeDomain t);
std::string_view to_string(Partite p);
std::string_view to_string(Aggregator a);

// Throws kInvalidArgument when the sizes differ.
void require_same_size(Index expected, Index actual, std::string_view what);

}  // namespace signedcrowd
