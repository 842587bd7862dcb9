#include "signedcrowd/types.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kSignatureInvalid: return "SignatureInvalid";
    case ErrorCode::kAssumptionViolated: return "AssumptionViolated";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kDegenerateStubbornness: return "DegenerateStubbornness";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kStepSizeUnstable: return "StepSizeUnstable";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kLabelNeedsSignature: return "LabelNeedsSignature";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kInvalidBelief: return "InvalidBelief";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(Dynamics d) {
  switch (d) {
    case Dynamics::kDeGroot: return "degroot";
    case Dynamics::kSFJ: return "sfj";
    case Dynamics::kConcatSFJ: return "concat";
  }
  return "?";
}

std::string_view to_string(TimeDomain t) {
  return t == TimeDomain::kDiscrete ? "dt" : "ct";
}

std::string_view to_string(Partite p) {
  return p == Partite::kUnipartite ? "unipartite" : "bipartite";
}

std::string_view to_string(Aggregator a) {
  return a == Aggregator::kPopulation ? "pop" : "group";
}

void require_same_size(Index expected, Index actual, std::string_view what) {
  if (expected != actual) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} has size {}, expected {}", what, actual, expected));
  }
}

namespace {

void require_square_finite(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} must be square, got {}x{}", what, m.rows(), m.cols()));
  }
  if (m.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("{} needs n >= 2", what));
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("{} entry ({}, {}) is not finite", what, i + 1, j + 1));
      }
    }
  }
}

}  // namespace

InteractionMatrix::InteractionMatrix(Matrix entries) : m_(std::move(entries)) {
  require_square_finite(m_, "interaction matrix");
}

bool InteractionMatrix::has_negative_entry() const { return (m_.array() < 0.0).any(); }

SignedLaplacian::SignedLaplacian(Matrix entries) : m_(std::move(entries)) {
  require_square_finite(m_, "Laplacian");
  const double slack = tol::kRow * std::max(1.0, m_.cwiseAbs().rowwise().sum().maxCoeff());
  const Index n = m_.rows();
  if ((m_ * Vector::Ones(n)).cwiseAbs().maxCoeff() <= slack) {
    kernel_ = Vector::Ones(n);
    return;
  }
  // Gauge-transformed Laplacians (L_b = Xi L_s Xi) annihilate a mixed +-1
  // vector instead of 1. Recover it from the eigenvector nearest 0.
  Eigen::EigenSolver<Matrix> es(m_);
  if (es.info() == Eigen::Success) {
    Index best = 0;
    for (Index k = 1; k < n; ++k)
      if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(best))) best = k;
    Vector u = es.eigenvectors().col(best).real();
    Index top = 0;
    u.cwiseAbs().maxCoeff(&top);
    if (u(top) != 0.0) {
      u /= u(top);
      Vector v = u.array().sign().matrix();
      if ((u - v).cwiseAbs().maxCoeff() <= tol::kStochastic && (v.array() != 0.0).all() &&
          (m_ * v).cwiseAbs().maxCoeff() <= slack) {
        kernel_ = std::move(v);
        return;
      }
    }
  }
  const Vector row_sums = m_.rowwise().sum();
  Index worst = 0;
  row_sums.cwiseAbs().maxCoeff(&worst);
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("Laplacian row {} sums to {:.3e} and no +-1 vector v gives L v = 0",
                          worst + 1, row_sums(worst)));
}

Signature::Signature(Vector values) : v_(std::move(values)) {
  for (Index i = 0; i < v_.size(); ++i) {
    if (v_(i) != 1.0 && v_(i) != -1.0) {
      throw Error(ErrorCode::kSignatureInvalid,
                  fmt::format("entry {} is {}, expected +1 or -1", i + 1, v_(i)));
    }
  }
}

Signature Signature::ones(Index n) { return Signature(Vector::Ones(n)); }

bool Signature::is_all_positive() const { return (v_.array() > 0.0).all(); }

StubbornnessProfile::StubbornnessProfile(Vector theta) : theta_(std::move(theta)) {
  for (Index i = 0; i < theta_.size(); ++i) {
    const double t = theta_(i);
    if (!(t >= 0.0 && t < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("theta_{} = {} outside [0, 1)", i + 1, t));
    }
  }
}

}  // namespace signedcrowd
