#include "nllab/measures.hpp"

#include <algorithm>
#include <cmath>

#include "nllab/errors.hpp"

namespace nllab {

ComplexMatrix gram_under(const ProductBasis& s, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != s.dA() || a.cols() != s.dA() || b.rows() != s.dB() || b.cols() != s.dB()) {
    throw ContractViolation("gram_under: operator dimensions do not match the basis");
  }
  const ComplexMatrix& x = s.alice_matrix();
  const ComplexMatrix& y = s.bob_matrix();
  ComplexMatrix g = (x.adjoint() * a * x).cwiseProduct(y.adjoint() * b * y);
  // The diagonal is real for PSD a, b; drop rounding noise in the imaginary part.
  for (Index i = 0; i < g.rows(); ++i) g(i, i) = g(i, i).real();
  return g;
}

ComplexMatrix gram_under(const ProductBasis& s, const MeasurementPair& m) {
  return gram_under(s, m.a.matrix(), m.b.matrix());
}

GramSummary summarize_gram(const ComplexMatrix& g, double scale, double ratio_floor) {
  GramSummary out;
  const Index n = g.rows();
  out.diag_min = g(0, 0).real();
  for (Index k = 0; k < n; ++k) {
    const double d = g(k, k).real();
    out.diag_sum += d;
    if (d > out.diag_max || k == 0) {
      out.diag_max = d;
      out.argmax = static_cast<std::size_t>(k);
    }
    out.diag_min = std::min(out.diag_min, d);
  }
  if (out.diag_sum > 0.0) {
    out.info_gain = out.diag_max / out.diag_sum - 1.0 / static_cast<double>(n);
  }
  if (out.diag_min > kDiagFloorRel * scale) {
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double v = std::abs(g(i, j)) / std::sqrt(g(i, i).real() * g(j, j).real());
        worst = std::max(worst, v);
      }
    }
    out.delta = worst;
  }
  if (out.delta && out.info_gain && *out.info_gain > ratio_floor) {
    out.ratio = *out.delta / *out.info_gain;
  }
  return out;
}

double disturbance(const ProductBasis& s, const MeasurementPair& m) {
  const GramSummary sum = summarize_gram(gram_under(s, m), m.a.trace() * m.b.trace());
  if (!sum.delta) {
    throw UndefinedQuantity("disturbance undefined: some <psi_i|a⊗b|psi_i> is below the floor");
  }
  return *sum.delta;
}

double info_gain(const ProductBasis& s, const MeasurementPair& m) {
  const GramSummary sum = summarize_gram(gram_under(s, m), m.a.trace() * m.b.trace());
  if (!sum.info_gain) {
    throw UndefinedQuantity("information gain undefined: zero total probability");
  }
  return *sum.info_gain;
}

std::optional<double> nonlocality_ratio(const ProductBasis& s, const MeasurementPair& m,
                                        double ratio_floor) {
  return summarize_gram(gram_under(s, m), m.a.trace() * m.b.trace(), ratio_floor).ratio;
}

double rigidity_deviation(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n) {
  const double ta = a.trace().real();
  const double tb = b.trace().real();
  const double trace = ta * tb;
  if (!(trace > 0.0)) throw UndefinedQuantity("rigidity_deviation: zero trace");
  const double uniform = 1.0 / static_cast<double>(n);
  double worst = 0.0;
  // Entry ((i,k),(j,l)) of a ⊗ b is a_ij b_kl; the identity sits on i=j, k=l.
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        for (Index l = 0; l < b.cols(); ++l) {
          Complex v = a(i, j) * b(k, l) / trace;
          if (i == j && k == l) v -= uniform;
          worst = std::max(worst, std::abs(v));
        }
      }
    }
  }
  return worst;
}

double rigidity_deviation(const MeasurementPair& m, std::size_t n) {
  return rigidity_deviation(m.a.matrix(), m.b.matrix(), n);
}

MeasureReport measure(const ProductBasis& s, const MeasurementPair& m,
                      std::optional<std::uint64_t> seed) {
  MeasureReport out;
  out.G = gram_under(s, m);
  const GramSummary sum = summarize_gram(out.G, m.a.trace() * m.b.trace());
  if (!sum.info_gain) {
    throw UndefinedQuantity("measure: zero total probability");
  }
  out.delta = sum.delta;
  out.info_gain = *sum.info_gain;
  out.ratio = sum.ratio;
  out.valid = sum.delta.has_value();
  out.rigidity_dev = rigidity_deviation(m, s.size());
  out.seed = seed;
  return out;
}

}  // namespace nllab
