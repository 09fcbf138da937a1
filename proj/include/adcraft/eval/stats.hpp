#pragma once

#include <string_view>
#include <vector>

namespace adcraft::eval {

/// Sample Pearson correlation. Throws DegenerateInput on length mismatch,
/// fewer than two points or zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// 1-based ranks; tied values share the average of their ranks.
std::vector<double> average_ranks(const std::vector<double>& x);

/// Pearson correlation of the average ranks.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// ICC(2,1): two-way random effects, absolute agreement, single rater.
/// `ratings[r][s]` is rater r's rating of subject s. Throws DegenerateInput
/// for fewer than 2 raters or subjects, ragged rows, or zero total variance.
double icc(const std::vector<std::vector<double>>& ratings);

/// How several human raters are combined before comparing with the judge.
enum class Aggregation {
    mean,   // per-subject mean of the human ratings
    pooled, // every (human rating, judge rating) pair counts separately
};
std::string_view to_string(Aggregation a);

struct AgreementReport {
    Aggregation aggregation = Aggregation::mean;
    std::size_t pairs = 0;
    double pearson = 0.0;
    double spearman = 0.0;
    /// mean: ICC over {human mean, judge}; pooled: over every human rater plus the judge.
    double icc = 0.0;
};

/// Human/judge agreement. `human[r][s]` as for icc, `judge[s]` per subject.
AgreementReport human_judge_agreement(const std::vector<std::vector<double>>& human, const std::vector<double>& judge,
                                      Aggregation aggregation);

} // namespace adcraft::eval
