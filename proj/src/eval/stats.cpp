#include "adcraft/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "adcraft/errors.hpp"

namespace adcraft::eval {

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw DegenerateInput(fmt::format("length mismatch: {} vs {}", x.size(), y.size()));
    if (x.size() < 2)
        throw DegenerateInput("need at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw DegenerateInput("zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& x)
{
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]])
            ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw DegenerateInput(fmt::format("length mismatch: {} vs {}", x.size(), y.size()));
    return pearson(average_ranks(x), average_ranks(y));
}

double icc(const std::vector<std::vector<double>>& ratings)
{
    const std::size_t k = ratings.size();
    if (k < 2)
        throw DegenerateInput("ICC needs at least two raters");
    const std::size_t n = ratings.front().size();
    if (n < 2)
        throw DegenerateInput("ICC needs at least two subjects");
    for (const auto& row : ratings)
        if (row.size() != n)
            throw DegenerateInput("every rater must rate every subject");

    double grand = 0;
    std::vector<double> subject_mean(n, 0.0), rater_mean(k, 0.0);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t s = 0; s < n; ++s) {
            grand += ratings[r][s];
            subject_mean[s] += ratings[r][s];
            rater_mean[r] += ratings[r][s];
        }
    const double kd = static_cast<double>(k), nd = static_cast<double>(n);
    grand /= kd * nd;
    for (auto& m : subject_mean)
        m /= kd;
    for (auto& m : rater_mean)
        m /= nd;

    double ss_rows = 0, ss_cols = 0, ss_total = 0;
    for (double m : subject_mean)
        ss_rows += (m - grand) * (m - grand);
    ss_rows *= kd;
    for (double m : rater_mean)
        ss_cols += (m - grand) * (m - grand);
    ss_cols *= nd;
    for (const auto& row : ratings)
        for (double v : row)
            ss_total += (v - grand) * (v - grand);
    if (ss_total == 0)
        throw DegenerateInput("all ratings are identical");
    const double ss_err = ss_total - ss_rows - ss_cols;
    const double msr = ss_rows / (nd - 1);
    const double msc = ss_cols / (kd - 1);
    const double mse = ss_err / ((nd - 1) * (kd - 1));
    const double denom = msr + (kd - 1) * mse + kd * (msc - mse) / nd;
    if (denom == 0)
        throw DegenerateInput("ICC denominator is zero");
    return (msr - mse) / denom;
}

std::string_view to_string(Aggregation a) { return a == Aggregation::mean ? "mean" : "pooled"; }

AgreementReport human_judge_agreement(const std::vector<std::vector<double>>& human, const std::vector<double>& judge,
                                      Aggregation aggregation)
{
    if (human.empty())
        throw DegenerateInput("no human ratings");
    for (const auto& row : human)
        if (row.size() != judge.size())
            throw DegenerateInput("every human rater must rate every judged subject");
    AgreementReport out;
    out.aggregation = aggregation;
    if (aggregation == Aggregation::mean) {
        std::vector<double> mean(judge.size(), 0.0);
        for (const auto& row : human)
            for (std::size_t s = 0; s < row.size(); ++s)
                mean[s] += row[s] / static_cast<double>(human.size());
        out.pairs = judge.size();
        out.pearson = pearson(mean, judge);
        out.spearman = spearman(mean, judge);
        out.icc = icc({mean, judge});
    } else {
        std::vector<double> h, j;
        for (const auto& row : human) {
            h.insert(h.end(), row.begin(), row.end());
            j.insert(j.end(), judge.begin(), judge.end());
        }
        out.pairs = h.size();
        out.pearson = pearson(h, j);
        out.spearman = spearman(h, j);
        auto all = human;
        all.push_back(judge);
        out.icc = icc(all);
    }
    return out;
}

} // namespace adcraft::eval
