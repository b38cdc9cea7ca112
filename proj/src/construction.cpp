#include "tribes/construction.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tribes/error.hpp"

namespace tribes {

namespace {

// 2^(1-k): the strictness threshold for a tribe of size k.
Dyadic tribe_threshold(std::size_t k) {
  return k == 1 ? Dyadic(1) : Dyadic::pow2_neg(static_cast<long>(k - 1));
}

Dyadic failure_factor(std::uint32_t k) {
  return one_minus(Dyadic::pow2_neg(static_cast<long>(k)));
}

void require_m_star(const TribePartition& p, std::size_t m_star, const char* who) {
  if (m_star < 1 || m_star > p.m()) {
    throw std::invalid_argument(std::string(who) + ": m_star " +
                                std::to_string(m_star) + " outside 1.." +
                                std::to_string(p.m()));
  }
}

void require_open_unit(const Rational& mu) {
  if (mu.sign() <= 0 || mu >= Rational(1)) {
    throw std::invalid_argument("mu = " + mu.str() + " must satisfy 0 < mu < 1");
  }
}

Check exact_check(const char* name, Rational margin, bool pass) {
  Check c;
  c.name = name;
  c.pass = pass;
  c.margin = margin.to_double();
  c.exact_margin = std::move(margin);
  return c;
}

}  // namespace

std::size_t TribePartition::prefix(std::size_t i) const noexcept {
  return std::accumulate(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(i),
                         std::size_t{0});
}

bool ConstructionReport::all_checks_pass() const noexcept {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* ConstructionReport::find_check(const std::string& name) const noexcept {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

SortedBounds sort_bounds(const BoundSequence& bounds) {
  SortedBounds sb;
  sb.perm.resize(bounds.size());
  std::iota(sb.perm.begin(), sb.perm.end(), std::size_t{0});
  std::stable_sort(sb.perm.begin(), sb.perm.end(), [&](std::size_t a, std::size_t b) {
    return bounds[a] > bounds[b];
  });
  sb.sorted.reserve(bounds.size());
  for (const std::size_t j : sb.perm) sb.sorted.push_back(bounds[j]);
  return sb;
}

TribePartition partition(const SortedBounds& sb) {
  TribePartition p;
  p.n = sb.sorted.size();
  std::size_t start = 0;
  for (;;) {
    std::size_t chosen = 0;
    // Indices past n make the defining condition false.
    for (std::size_t k = 1; start + k <= p.n; ++k) {
      if (compare(sb.sorted[start + k - 1], tribe_threshold(k)) > 0) {
        chosen = k;
        break;
      }
    }
    if (chosen == 0) break;
    p.k.push_back(static_cast<std::uint32_t>(chosen));
    start += chosen;
  }
  return p;
}

std::vector<Dyadic> failure_prefix_products(const TribePartition& p) {
  std::vector<Dyadic> out;
  out.reserve(p.m() + 1);
  out.emplace_back(1);
  for (const std::uint32_t k : p.k) out.push_back(out.back() * failure_factor(k));
  return out;
}

std::size_t select_m_star(const TribePartition& p, const Rational& mu) {
  require_open_unit(mu);
  if (p.m() == 0) {
    throw ConstructionInfeasible("no tribe satisfies a_{s+k} > 2^(1-k); m = 0");
  }
  const Rational target = Rational(1) - mu;
  Dyadic product(1);
  for (std::size_t r = 1; r <= p.m(); ++r) {
    product = product * failure_factor(p.k[r - 1]);
    if (compare(product, target) <= 0) return r;
  }
  throw MuNotAchievable("failure product over all " + std::to_string(p.m()) +
                        " tribes is " + product.str() + " > 1 - mu = " +
                        target.str());
}

TribesFunction build(const TribePartition& p, std::size_t m_star,
                     const SortedBounds& sb) {
  require_m_star(p, m_star, "build");
  if (sb.perm.size() != p.n) {
    throw std::invalid_argument("build: partition and sorted bounds disagree on n");
  }
  TribesFunction f;
  f.n = p.n;
  f.tribe_sizes.assign(p.k.begin(), p.k.begin() + static_cast<std::ptrdiff_t>(m_star));
  const std::size_t relevant = p.prefix(m_star);
  f.var_map.assign(sb.perm.begin(), sb.perm.begin() + static_cast<std::ptrdiff_t>(relevant));
  return f;
}

Dyadic analytic_expectation(const TribePartition& p, std::size_t m_star) {
  require_m_star(p, m_star, "analytic_expectation");
  Dyadic product(1);
  for (std::size_t i = 0; i < m_star; ++i) product = product * failure_factor(p.k[i]);
  return one_minus(product);
}

std::vector<Dyadic> analytic_tribe_influences(const TribePartition& p,
                                              std::size_t m_star) {
  require_m_star(p, m_star, "analytic_tribe_influences");
  // prefix[i] = prod_{l<i}, suffix[i] = prod_{l>=i}; no division needed.
  std::vector<Dyadic> prefix(m_star + 1, Dyadic(1));
  std::vector<Dyadic> suffix(m_star + 1, Dyadic(1));
  for (std::size_t i = 0; i < m_star; ++i) {
    prefix[i + 1] = prefix[i] * failure_factor(p.k[i]);
  }
  for (std::size_t i = m_star; i-- > 0;) {
    suffix[i] = suffix[i + 1] * failure_factor(p.k[i]);
  }
  std::vector<Dyadic> out;
  out.reserve(m_star);
  for (std::size_t i = 0; i < m_star; ++i) {
    out.push_back((prefix[i] * suffix[i + 1]).halved(p.k[i] - 1));
  }
  return out;
}

Dyadic analytic_influence(const TribePartition& p, std::size_t m_star,
                          std::size_t position) {
  require_m_star(p, m_star, "analytic_influence");
  if (position >= p.n) {
    throw std::invalid_argument("analytic_influence: position " +
                                std::to_string(position) + " outside 0.." +
                                std::to_string(p.n - 1));
  }
  std::size_t end = 0;
  for (std::size_t i = 0; i < m_star; ++i) {
    end += p.k[i];
    if (position < end) return analytic_tribe_influences(p, m_star)[i];
  }
  return {};
}

double claim1_margin(const TribePartition& p, double alpha_value) {
  Dyadic sum;
  for (const std::uint32_t k : p.k) sum = sum + Dyadic::pow2_neg(k);
  return sum.to_double() - alpha_value / 8.0;
}

std::vector<Check> evaluate_checks(const CheckInputs& in) {
  if (in.influences.size() != in.bounds.size()) {
    throw std::invalid_argument("evaluate_checks: " +
                                std::to_string(in.influences.size()) +
                                " influences for " +
                                std::to_string(in.bounds.size()) + " bounds");
  }
  std::vector<Check> checks;

  {
    Rational margin = in.expectation - in.mu;
    const bool pass = margin.sign() >= 0;
    checks.push_back(exact_check(check_names::kExpectationLower, std::move(margin), pass));
  }
  {
    const Rational upper = Rational(mpz_class(3), mpz_class(4)) * in.mu +
                           Rational(mpz_class(1), mpz_class(4));
    Rational margin = upper - in.expectation;
    const bool pass = margin.sign() >= 0;
    checks.push_back(exact_check(check_names::kExpectationUpper, std::move(margin), pass));
  }
  {
    std::optional<Rational> smallest;
    for (std::size_t j = 0; j < in.bounds.size(); ++j) {
      Rational gap = in.bounds[j] - in.influences[j];
      if (!smallest || gap < *smallest) smallest = std::move(gap);
    }
    const bool pass = smallest->sign() > 0;
    checks.push_back(exact_check(check_names::kInfluenceStrict, std::move(*smallest), pass));
  }
  {
    const Rational target = Rational(1) - in.mu;
    if (in.m_star < 1 || in.m_star > in.partition.m()) {
      checks.push_back(exact_check(check_names::kMStarMinimality, Rational(0), false));
    } else {
      const auto products = failure_prefix_products(in.partition);
      // Member of the defining set, and the previous prefix is not.
      const bool reaches = compare(products[in.m_star], target) <= 0;
      Rational margin = products[in.m_star - 1] - target;
      const bool pass = reaches && margin.sign() > 0;
      checks.push_back(exact_check(check_names::kMStarMinimality, std::move(margin), pass));
    }
  }
  {
    Check c;
    c.name = check_names::kClaim1;
    c.margin = claim1_margin(in.partition, in.alpha);
    c.pass = c.margin >= -in.log_tolerance;
    checks.push_back(std::move(c));
  }
  return checks;
}

ConstructionReport construct(const BoundSequence& bounds, const Rational& mu,
                             const ConstructOptions& opts) {
  if (bounds.empty()) throw std::invalid_argument("construct: no bounds");
  require_open_unit(mu);

  ConstructionReport r;
  r.bounds = bounds;
  r.summary = analyze(bounds);
  r.mu = mu;
  r.guaranteed =
      r.summary.feasible && mu.to_double() <= r.summary.mu_max + opts.log_tolerance;
  r.sorted = sort_bounds(bounds);
  r.partition = partition(r.sorted);
  r.m_star = select_m_star(r.partition, mu);
  r.function = build(r.partition, r.m_star, r.sorted);
  r.expectation = analytic_expectation(r.partition, r.m_star);

  r.influences.assign(bounds.size(), Dyadic());
  const auto per_tribe = analytic_tribe_influences(r.partition, r.m_star);
  std::size_t position = 0;
  for (std::size_t i = 0; i < r.m_star; ++i) {
    for (std::uint32_t k = 0; k < r.partition.k[i]; ++k, ++position) {
      r.influences[r.function.var_map[position]] = per_tribe[i];
    }
  }

  r.checks = evaluate_checks({bounds, mu, r.partition, r.m_star, r.expectation,
                              r.influences, r.summary.alpha, opts.log_tolerance});
  return r;
}

}  // namespace tribes
