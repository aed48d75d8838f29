#pragma once

#include "liftrom/dynamics/input.hpp"
#include "liftrom/dynamics/layout.hpp"
#include "liftrom/dynamics/ode_model.hpp"

#include <memory>
#include <nlohmann/json.hpp>
#include <span>
#include <string>

namespace liftrom {

/// Componentwise nonlinearity g: R^n -> R^{n_g}. Component j reads the
/// `arity()` state entries listed by `dependencies(j)` and nothing else, which
/// is what lets DEIM evaluate sampled components at O(1) cost each.
class ComponentNonlinearity {
 public:
  virtual ~ComponentNonlinearity() = default;

  virtual Index size() const = 0;
  virtual int arity() const = 0;
  virtual void dependencies(Index j, std::span<Index> out) const = 0;
  virtual double value(Index j, std::span<const double> local) const = 0;
  virtual void gradient(Index j, std::span<const double> local, std::span<double> grad) const = 0;

  virtual std::string kind() const = 0;
  virtual nlohmann::json params() const = 0;

  /// g(x) for the full state.
  Vector evaluate(const Vector& x) const;
};

/// g_j = -v_j^3 + a2 v_j^2 on a block of n entries starting at `offset`.
class CubicNonlinearity final : public ComponentNonlinearity {
 public:
  CubicNonlinearity(Index n, Index offset, double a2) : n_(n), offset_(offset), a2_(a2) {}

  Index size() const override { return n_; }
  int arity() const override { return 1; }
  void dependencies(Index j, std::span<Index> out) const override { out[0] = offset_ + j; }
  double value(Index, std::span<const double> v) const override;
  void gradient(Index, std::span<const double> v, std::span<double> g) const override;
  std::string kind() const override { return "cubic"; }
  nlohmann::json params() const override;

 private:
  Index n_, offset_;
  double a2_;
};

/// g_j = psi_j exp(gamma - gamma / theta_j); theta_j <= 0 raises DomainError.
class ArrheniusNonlinearity final : public ComponentNonlinearity {
 public:
  ArrheniusNonlinearity(Index n, Index psi_offset, Index theta_offset, double gamma)
      : n_(n), psi_(psi_offset), theta_(theta_offset), gamma_(gamma) {}

  Index size() const override { return n_; }
  int arity() const override { return 2; }
  void dependencies(Index j, std::span<Index> out) const override;
  double value(Index, std::span<const double> local) const override;
  void gradient(Index, std::span<const double> local, std::span<double> g) const override;
  std::string kind() const override { return "arrhenius"; }
  nlohmann::json params() const override;

 private:
  Index n_, psi_, theta_;
  double gamma_;
};

/// E x' = A x + B u + F g(x).
struct GeneralNonlinearSystem {
  SparseMatrix E;  ///< empty means identity
  SparseMatrix A;
  Matrix B;
  SparseMatrix F;
  std::shared_ptr<const ComponentNonlinearity> g;
  Layout layout;

  Index dim() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  void validate() const;
};

Vector eval_rhs_general(const GeneralNonlinearSystem& sys, const Vector& x, const Vector& u);
/// dg/dx as an n_g x n sparse matrix.
SparseMatrix nonlinearity_jacobian(const ComponentNonlinearity& g, const Vector& x);

class GeneralModel final : public OdeModel {
 public:
  GeneralModel(GeneralNonlinearSystem sys, InputSignal input);

  Index dim() const override { return sys_.dim(); }
  const SparseMatrix* mass() const override { return sys_.E.size() ? &sys_.E : nullptr; }
  void rhs(double t, const Vector& x, Vector& f) const override;
  void jacobian_sparse(double t, const Vector& x, SparseMatrix& jac) const override;
  const SparseMatrix* linear_part() const override { return &sys_.A; }

  const GeneralNonlinearSystem& system() const { return sys_; }

 private:
  GeneralNonlinearSystem sys_;
  InputSignal input_;
};

}  // namespace liftrom
