#include "xmlad/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

namespace xmlad::stats {

double paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(Errc::LengthMismatch, "paired t-test needs two samples of equal length >= 2 (got " +
                                          std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
  }
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) return mean <= 0.0 ? 1.0 : 0.0;
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::cdf(boost::math::complement(dist, t));
}

char symbol(Outcome o) noexcept {
  switch (o) {
    case Outcome::Better: return '+';
    case Outcome::Worse: return '-';
    case Outcome::Equal: return '=';
  }
  return '=';
}

std::vector<std::vector<double>> rank_rows(const std::vector<std::vector<double>>& matrix) {
  std::vector<std::vector<double>> ranks;
  ranks.reserve(matrix.size());
  for (const auto& row : matrix) {
    const std::size_t k = row.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return row[x] > row[y]; });
    std::vector<double> r(k);
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i;
      while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
      const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
      i = j + 1;
    }
    ranks.push_back(std::move(r));
  }
  return ranks;
}

double bonferroni_dunn_q(std::size_t classifiers, double alpha) {
  if (classifiers < 2) throw Error(Errc::DegenerateMatrix, "need at least two classifiers");
  const double tail = alpha / (2.0 * static_cast<double>(classifiers - 1));
  return boost::math::quantile(boost::math::complement(boost::math::normal(), tail));
}

SignificanceReport friedman_bonferroni(const std::vector<std::vector<double>>& auc_matrix, std::size_t reference,
                                       double alpha) {
  const std::size_t n = auc_matrix.size();
  if (n < 2) throw Error(Errc::DegenerateMatrix, "need at least two datasets");
  const std::size_t k = auc_matrix.front().size();
  if (k < 2) throw Error(Errc::DegenerateMatrix, "need at least two classifiers");
  for (const auto& row : auc_matrix) {
    if (row.size() != k) throw Error(Errc::DegenerateMatrix, "ragged AUC matrix");
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(Errc::DegenerateMatrix, "non-finite AUC");
    }
  }
  if (reference >= k) throw Error(Errc::DegenerateMatrix, "reference classifier out of range");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::UsageError, "alpha must lie in (0, 1)");

  SignificanceReport rep;
  rep.datasets = n;
  rep.classifiers = k;
  rep.alpha = alpha;
  rep.reference = reference;

  const auto ranks = rank_rows(auc_matrix);
  rep.average_ranks.assign(k, 0.0);
  for (const auto& r : ranks) {
    for (std::size_t j = 0; j < k; ++j) rep.average_ranks[j] += r[j];
  }
  for (double& r : rep.average_ranks) r /= static_cast<double>(n);

  const double N = static_cast<double>(n);
  const double K = static_cast<double>(k);
  double sum_sq = 0.0;
  for (double r : rep.average_ranks) sum_sq += r * r;
  rep.friedman_chi2 = std::max(0.0, 12.0 * N / (K * (K + 1.0)) * (sum_sq - K * (K + 1.0) * (K + 1.0) / 4.0));
  const double denom = N * (K - 1.0) - rep.friedman_chi2;
  if (rep.friedman_chi2 <= 1e-12) {
    rep.friedman_f = 0.0;
    rep.friedman_p = 1.0;
  } else if (denom <= 0.0) {
    rep.friedman_f = std::numeric_limits<double>::infinity();
    rep.friedman_p = 0.0;
  } else {
    rep.friedman_f = (N - 1.0) * rep.friedman_chi2 / denom;
    boost::math::fisher_f dist(K - 1.0, (K - 1.0) * (N - 1.0));
    rep.friedman_p = boost::math::cdf(boost::math::complement(dist, rep.friedman_f));
  }

  rep.critical_difference = bonferroni_dunn_q(k, alpha) * std::sqrt(K * (K + 1.0) / (6.0 * N));
  rep.post_hoc.assign(k, Outcome::Equal);
  if (rep.friedman_p < alpha) {
    for (std::size_t j = 0; j < k; ++j) {
      const double diff = rep.average_ranks[reference] - rep.average_ranks[j];
      if (diff > rep.critical_difference) rep.post_hoc[j] = Outcome::Better;
      if (-diff > rep.critical_difference) rep.post_hoc[j] = Outcome::Worse;
    }
    rep.post_hoc[reference] = Outcome::Equal;
  }

  rep.pairwise.assign(k, std::vector<Outcome>(k, Outcome::Equal));
  std::vector<double> col_i(n), col_j(n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t d = 0; d < n; ++d) {
        col_i[d] = auc_matrix[d][i];
        col_j[d] = auc_matrix[d][j];
      }
      Outcome o = Outcome::Equal;
      if (paired_t_test(col_j, col_i) < alpha) {
        o = Outcome::Better;
      } else if (paired_t_test(col_i, col_j) < alpha) {
        o = Outcome::Worse;
      }
      rep.pairwise[i][j] = o;
      rep.pairwise[j][i] = o == Outcome::Better ? Outcome::Worse : o == Outcome::Worse ? Outcome::Better : o;
    }
  }
  return rep;
}

std::string format_report(const SignificanceReport& report, const std::vector<std::string>& names) {
  std::ostringstream out;
  std::size_t width = 6;
  for (const auto& name : names) width = std::max(width, name.size());
  auto pad = [&](const std::string& s) { return s + std::string(width + 2 - std::min(width + 2, s.size()), ' '); };

  out << "Pairwise one-tailed paired t-tests, alpha = " << format_double(report.alpha) << "\n";
  out << "'+': column method significantly better than row method; '-': worse; '=': no significant difference\n\n";
  out << pad("");
  for (const auto& name : names) out << pad(name);
  out << "\n";
  for (std::size_t i = 0; i < report.classifiers; ++i) {
    out << pad(names[i]);
    for (std::size_t j = 0; j < report.classifiers; ++j) {
      out << pad(i == j ? std::string("x") : std::string(1, symbol(report.pairwise[i][j])));
    }
    out << "\n";
  }
  out << "\nAverage ranks (1 = best) over " << report.datasets << " rows\n";
  for (std::size_t j = 0; j < report.classifiers; ++j) {
    out << pad(names[j]) << format_double(report.average_ranks[j]) << "\n";
  }
  out << "\nFriedman chi2 = " << format_double(report.friedman_chi2) << ", Iman-Davenport F = "
      << format_double(report.friedman_f) << ", p = " << format_double(report.friedman_p) << "\n";
  out << "Bonferroni-Dunn critical difference = " << format_double(report.critical_difference)
      << " (reference: " << names[report.reference] << ")\n";
  out << "'+': better than the reference; '-': worse; '=': no significant difference\n";
  for (std::size_t j = 0; j < report.classifiers; ++j) {
    if (j == report.reference) continue;
    out << pad(names[j]) << symbol(report.post_hoc[j]) << "\n";
  }
  return out.str();
}

}  // namespace xmlad::stats
