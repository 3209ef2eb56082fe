#include "jcqrc/hilbert.hpp"

#include "jcqrc/error.hpp"

#include <cmath>
#include <string>

namespace jcqrc {

SpaceLayout make_layout(Index boson_dim) {
  if (boson_dim < 2) {
    throw ConfigError("boson dimension must be >= 2, got " + std::to_string(boson_dim));
  }
  return SpaceLayout{boson_dim};
}

BosonOps build_boson_ops(const SpaceLayout& layout) {
  const Index dim = layout.boson_dim;
  if (dim < 2) {
    throw ConfigError("boson dimension must be >= 2, got " + std::to_string(dim));
  }
  BosonOps ops;
  ops.c = ComplexMatrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) {
    ops.c(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  ops.c_dag = ops.c.adjoint();
  ops.n = ops.c_dag * ops.c;
  return ops;
}

QubitOps build_qubit_ops() {
  QubitOps ops;
  ops.sz = ComplexMatrix::Zero(2, 2);
  ops.sz(kExcited, kExcited) = 1.0;
  ops.sz(kGround, kGround) = -1.0;
  ops.sp = ComplexMatrix::Zero(2, 2);
  ops.sp(kExcited, kGround) = 1.0;
  ops.sm = ops.sp.adjoint();
  ops.sx = ops.sp + ops.sm;
  return ops;
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix on_qubit(const ComplexMatrix& op, const SpaceLayout& layout) {
  if (op.rows() != SpaceLayout::qubit_dim || op.cols() != SpaceLayout::qubit_dim) {
    throw DimensionError("on_qubit: operator must be 2x2");
  }
  return kron(op, identity(layout.boson_dim));
}

ComplexMatrix on_boson(const ComplexMatrix& op, const SpaceLayout& layout) {
  if (op.rows() != layout.boson_dim || op.cols() != layout.boson_dim) {
    throw DimensionError("on_boson: operator dimension " + std::to_string(op.rows()) +
                         " does not match boson_dim " + std::to_string(layout.boson_dim));
  }
  return kron(identity(SpaceLayout::qubit_dim), op);
}

namespace {

void require_joint(const ComplexMatrix& rho, const SpaceLayout& layout, const char* what) {
  const Index d = layout.joint_dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(d) + "x" +
                         std::to_string(d) + " matrix, got " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()));
  }
}

}  // namespace

ComplexMatrix partial_trace_qubit(const ComplexMatrix& rho, const SpaceLayout& layout) {
  require_joint(rho, layout, "partial_trace_qubit");
  const Index n = layout.boson_dim;
  return rho.block(0, 0, n, n) + rho.block(n, n, n, n);
}

ComplexMatrix partial_trace_boson(const ComplexMatrix& rho, const SpaceLayout& layout) {
  require_joint(rho, layout, "partial_trace_boson");
  const Index n = layout.boson_dim;
  ComplexMatrix out(2, 2);
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      out(a, b) = rho.block(a * n, b * n, n, n).trace();
    }
  }
  return out;
}

Complex expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
  if (rho.rows() != op.cols() || rho.cols() != op.rows()) {
    throw DimensionError("expectation: state is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + " but operator is " +
                         std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
  }
  return rho.cwiseProduct(op.transpose()).sum();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace jcqrc
