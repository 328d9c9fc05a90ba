#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace xmlad::stats {

/// One-tailed p-value for mean(a) > mean(b) from the paired t statistic.
/// Zero-variance differences give p = 1 when the mean difference is <= 0
/// and p = 0 otherwise. Throws LengthMismatch unless |a| == |b| >= 2.
double paired_t_test(std::span<const double> a, std::span<const double> b);

enum class Outcome { Better, Worse, Equal };

/// '+', '-' or '='.
char symbol(Outcome o) noexcept;

struct SignificanceReport {
  std::size_t datasets = 0;
  std::size_t classifiers = 0;
  double alpha = 0.05;
  /// pairwise[i][j]: how column method j compares with row method i
  /// (Better means j is significantly better than i).
  std::vector<std::vector<Outcome>> pairwise;
  std::vector<double> average_ranks;  // 1 = best
  double friedman_chi2 = 0.0;
  double friedman_f = 0.0;
  double friedman_p = 1.0;
  double critical_difference = 0.0;
  std::size_t reference = 0;
  /// post_hoc[j]: how method j compares with the reference; Equal for the
  /// reference itself and for every method when the Friedman test does not reject.
  std::vector<Outcome> post_hoc;
};

/// Ranks within each row, highest value first, ties sharing the average rank.
std::vector<std::vector<double>> rank_rows(const std::vector<std::vector<double>>& matrix);

/// Two-tailed Bonferroni-Dunn critical value z_{1 - alpha / (2 (k - 1))}.
double bonferroni_dunn_q(std::size_t classifiers, double alpha);

/// Rows are datasets, columns classifiers, cells AUCs (higher is better).
/// Friedman test in the Iman-Davenport F form, Bonferroni-Dunn against the
/// reference column, pairwise one-tailed paired t-tests over the rows.
/// Throws DegenerateMatrix for fewer than 2 rows or columns, ragged or
/// non-finite input, or a reference out of range.
SignificanceReport friedman_bonferroni(const std::vector<std::vector<double>>& auc_matrix, std::size_t reference,
                                       double alpha = 0.05);

/// Plain-text report: the pairwise +/-/= table, average ranks, Friedman
/// statistics and the post-hoc outcomes.
std::string format_report(const SignificanceReport& report, const std::vector<std::string>& names);

}  // namespace xmlad::stats
