#include "nllab/estimator.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "nllab/errors.hpp"

namespace nllab {
namespace {

// Returned to the simplex for points where the ratio is undefined.
constexpr double kPenalty = 1e6;

struct Factors {
  ComplexMatrix A;
  ComplexMatrix B;
};

class RatioEvaluator {
 public:
  RatioEvaluator(const ProductBasis& s, EtaEstimate& out) : s_(s), out_(out) {}

  std::optional<double> ratio(const Factors& f) {
    const ComplexMatrix a = f.A.adjoint() * f.A;
    const ComplexMatrix b = f.B.adjoint() * f.B;
    const ComplexMatrix g = gram_under(s_, a, b);
    const auto r = summarize_gram(g, a.trace().real() * b.trace().real()).ratio;
    ++out_.evaluations;
    if (!r) {
      ++out_.undefined;
      return std::nullopt;
    }
    out_.min_observed_ratio = std::min(out_.min_observed_ratio, *r);
    if (*r < best_) {
      best_ = *r;
      best_factors_ = f;
    }
    return r;
  }

  double best() const { return best_; }
  const std::optional<Factors>& best_factors() const { return best_factors_; }

 private:
  const ProductBasis& s_;
  EtaEstimate& out_;
  double best_ = std::numeric_limits<double>::infinity();
  std::optional<Factors> best_factors_;
};

std::vector<double> pack(const Factors& f) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(2 * (f.A.size() + f.B.size())));
  for (const ComplexMatrix* m : {&f.A, &f.B}) {
    for (Index i = 0; i < m->rows(); ++i) {
      for (Index j = 0; j < m->cols(); ++j) {
        v.push_back((*m)(i, j).real());
        v.push_back((*m)(i, j).imag());
      }
    }
  }
  return v;
}

Factors unpack(const std::vector<double>& v, int dA, int dB) {
  Factors f{ComplexMatrix(dA, dA), ComplexMatrix(dB, dB)};
  std::size_t k = 0;
  for (ComplexMatrix* m : {&f.A, &f.B}) {
    for (Index i = 0; i < m->rows(); ++i) {
      for (Index j = 0; j < m->cols(); ++j) {
        (*m)(i, j) = Complex(v[k], v[k + 1]);
        k += 2;
      }
    }
  }
  return f;
}

// Square factor for one side. The mixture covers generic full-rank
// operators, rank-deficient ones, and operators close to the identity
// (where the disturbance is small).
ComplexMatrix sample_factor(Index dim, Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.5) return ginibre(dim, dim, rng);
  if (u < 0.75) {
    ComplexMatrix f = ComplexMatrix::Zero(dim, dim);
    const Index rank = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dim)));
    f.topRows(rank) = ginibre(rank, dim, rng);
    return f;
  }
  const double tau = std::pow(10.0, rng.uniform(-4.0, 0.0));
  return ComplexMatrix::Identity(dim, dim) + tau * ginibre(dim, dim, rng);
}

struct Candidate {
  double ratio;
  Factors factors;
};

using VectorPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
using MinimizerPtr =
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;

// Nelder-Mead from one starting point; returns iterations used.
std::size_t refine(const Factors& start, RatioEvaluator& eval, int dA, int dB,
                   std::size_t max_iterations) {
  // Step relative to the factor scale so the simplex is scale-aware.
  const double scale = std::max(start.A.norm() / dA, start.B.norm() / dB);
  const auto objective = [&](const std::vector<double>& x) {
    const auto r = eval.ratio(unpack(x, dA, dB));
    return r ? *r : kPenalty;
  };
  return nelder_mead(objective, pack(start), 0.1 * std::max(scale, 1e-8), max_iterations,
                     1e-10 * std::max(scale, 1e-8))
      .iterations;
}

MeasurementPair normalized_pair(const Factors& f) {
  const ComplexMatrix a = f.A.adjoint() * f.A;
  const ComplexMatrix b = f.B.adjoint() * f.B;
  return {PsdOperator::trusted(a / a.trace().real()), PsdOperator::trusted(b / b.trace().real())};
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step,
                             std::size_t max_iterations, double size_tol) {
  if (x0.empty()) throw ContractViolation("nelder_mead: empty starting point");
  gsl_set_error_handler_off();
  const std::size_t dim = x0.size();
  VectorPtr x(gsl_vector_alloc(dim), gsl_vector_free);
  VectorPtr steps(gsl_vector_alloc(dim), gsl_vector_free);
  for (std::size_t k = 0; k < dim; ++k) gsl_vector_set(x.get(), k, x0[k]);
  gsl_vector_set_all(steps.get(), step);

  struct Ctx {
    const std::function<double(const std::vector<double>&)>* f;
    std::vector<double> buf;
  } ctx{&f, std::vector<double>(dim)};
  gsl_multimin_function fn{
      [](const gsl_vector* v, void* p) {
        auto* c = static_cast<Ctx*>(p);
        for (std::size_t k = 0; k < c->buf.size(); ++k) c->buf[k] = gsl_vector_get(v, k);
        return (*c->f)(c->buf);
      },
      dim, &ctx};
  MinimizerPtr m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2rand, dim),
                 gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), steps.get());
  NelderMeadResult out;
  while (out.iterations < max_iterations) {
    ++out.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), size_tol) == GSL_SUCCESS) {
      break;
    }
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  out.x.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) out.x[k] = gsl_vector_get(best, k);
  out.value = gsl_multimin_fminimizer_minimum(m.get());
  return out;
}

MeasurementPair upper_bound_construction(const ProductBasis& s, std::size_t i, double eps) {
  if (!(eps > 0.0)) throw DomainError("upper_bound_construction: eps must be positive");
  if (i >= s.size()) throw ContractViolation("upper_bound_construction: state index out of range");
  const ProductState& st = s[i];
  const ComplexMatrix a =
      st.alice * st.alice.adjoint() + eps * ComplexMatrix::Identity(s.dA(), s.dA());
  const ComplexMatrix b = st.bob * st.bob.adjoint() + eps * ComplexMatrix::Identity(s.dB(), s.dB());
  return {PsdOperator::trusted(a), PsdOperator::trusted(b)};
}

EtaEstimate estimate_eta(const ProductBasis& s, const EstimatorOptions& options) {
  if (options.budget < 1) throw DomainError("estimate_eta: budget must be at least 1");
  if (!s.is_orthonormal()) throw ContractViolation("estimate_eta: basis is not orthonormal");
  gsl_set_error_handler_off();

  EtaEstimate out;
  out.basis_id = options.basis_id;
  out.seed = options.seed;
  out.certified_lower = options.certified_lower;
  out.min_observed_ratio = std::numeric_limits<double>::infinity();
  RatioEvaluator eval(s, out);

  const std::size_t restarts =
      options.restarts > 0 ? options.restarts : std::max<std::size_t>(1, options.budget / 100);
  std::vector<Candidate> pool;  // best `restarts` candidates, sorted ascending
  auto offer = [&](double ratio, Factors f) {
    if (pool.size() == restarts && ratio >= pool.back().ratio) return;
    auto pos = std::upper_bound(pool.begin(), pool.end(), ratio,
                                [](double r, const Candidate& c) { return r < c.ratio; });
    pool.insert(pos, Candidate{ratio, std::move(f)});
    if (pool.size() > restarts) pool.pop_back();
  };

  for (std::size_t k = 0; k < options.budget; ++k) {
    Rng rng(derive_seed(options.seed, k));
    Factors f{sample_factor(s.dA(), rng), sample_factor(s.dB(), rng)};
    if (const auto r = eval.ratio(f)) offer(*r, std::move(f));
    ++out.samples;
  }
  for (double eps : options.eps_list) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const MeasurementPair m = upper_bound_construction(s, i, eps);
      Factors f{psd_sqrt(m.a).matrix(), psd_sqrt(m.b).matrix()};
      if (const auto r = eval.ratio(f)) offer(*r, std::move(f));
      ++out.samples;
    }
  }
  if (pool.empty()) {
    throw EstimationFailed("estimate_eta: every sample had an undefined ratio");
  }

  std::size_t iterations = 0;
  out.refinement_trace.push_back({0, eval.best()});
  for (const Candidate& c : pool) {
    iterations += refine(c.factors, eval, s.dA(), s.dB(), options.max_iterations);
    if (eval.best() < out.refinement_trace.back().ratio) {
      out.refinement_trace.push_back({iterations, eval.best()});
    }
  }
  out.best_ratio = eval.best();
  out.best_pair = normalized_pair(*eval.best_factors());
  return out;
}

}  // namespace nllab
