#include "contourqa/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "contourqa/rng.hpp"

namespace cqa {

uint64_t ConfusionMatrix5::total() const {
    uint64_t t = 0;
    for (const auto& row : counts)
        for (uint64_t c : row) t += c;
    return t;
}

std::optional<double> ConfusionMatrix5::recall(int true_class) const {
    uint64_t row = 0;
    for (uint64_t c : counts[true_class]) row += c;
    if (row == 0) return std::nullopt;
    return static_cast<double>(counts[true_class][true_class]) / static_cast<double>(row);
}

std::optional<double> ConfusionMatrix5::precision(int pred_class) const {
    uint64_t col = 0;
    for (int r = 0; r < 5; ++r) col += counts[r][pred_class];
    if (col == 0) return std::nullopt;
    return static_cast<double>(counts[pred_class][pred_class]) / static_cast<double>(col);
}

double ConfusionMatrix5::accuracy() const {
    const uint64_t t = total();
    if (t == 0) return 0.0;
    uint64_t diag = 0;
    for (int i = 0; i < 5; ++i) diag += counts[i][i];
    return static_cast<double>(diag) / static_cast<double>(t);
}

double ConfusionMatrix5::macro_recall() const {
    double sum = 0.0;
    int n = 0;
    for (int c = 0; c < 5; ++c)
        if (auto r = recall(c)) {
            sum += *r;
            ++n;
        }
    return n ? sum / n : 0.0;
}

ConfusionMatrix5& ConfusionMatrix5::operator+=(const ConfusionMatrix5& o) {
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) counts[r][c] += o.counts[r][c];
    return *this;
}

ConfusionMatrix5 confusion(const std::vector<uint8_t>& preds, const std::vector<uint8_t>& truths) {
    if (preds.size() != truths.size()) throw std::invalid_argument("confusion: length mismatch");
    ConfusionMatrix5 m;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] > 4 || truths[i] > 4) throw std::invalid_argument("confusion: class id out of range");
        ++m.counts[truths[i]][preds[i]];
    }
    return m;
}

EdgePRReport edge_precision_recall(const std::vector<uint8_t>& preds, const std::vector<uint8_t>& truths,
                                   const std::vector<float>& signed_distances, bool raw_sign_rule) {
    if (preds.size() != truths.size() || preds.size() != signed_distances.size())
        throw std::invalid_argument("edge_precision_recall: length mismatch");

    EdgePRReport rep;
    uint64_t prec_hits[2] = {0, 0};   // same-sign credit for predictions of {0, 4}
    uint64_t recall_hits[2] = {0, 0}; // strict class match

    for (size_t i = 0; i < preds.size(); ++i) {
        for (int side = 0; side < 2; ++side) {
            const uint8_t edge_class = side == 0 ? 0 : 4;
            EdgeClassPR& pr = side == 0 ? rep.internal : rep.external;
            if (preds[i] == edge_class) {
                ++pr.predicted;
                bool correct_sign;
                if (raw_sign_rule) {
                    correct_sign = side == 0 ? (signed_distances[i] < 0.0f) : (signed_distances[i] > 0.0f);
                } else {
                    correct_sign = side == 0 ? (truths[i] <= 1) : (truths[i] >= 3);
                }
                if (correct_sign) ++prec_hits[side];
            }
            if (truths[i] == edge_class) {
                ++pr.support;
                if (preds[i] == edge_class) ++recall_hits[side];
            }
        }
    }
    for (int side = 0; side < 2; ++side) {
        EdgeClassPR& pr = side == 0 ? rep.internal : rep.external;
        if (pr.predicted > 0)
            pr.precision = static_cast<double>(prec_hits[side]) / static_cast<double>(pr.predicted);
        pr.recall = pr.support > 0 ? static_cast<double>(recall_hits[side]) / static_cast<double>(pr.support) : 0.0;
    }
    return rep;
}

NeighborAgreement neighbor_agreement(const std::vector<std::array<uint32_t, 2>>& directed_edges,
                                     const std::vector<uint8_t>& preds) {
    const size_t n = preds.size();
    std::vector<uint32_t> degree(n, 0), agree(n, 0);
    for (const auto& e : directed_edges) {
        const uint32_t dst = e[1], src = e[0];
        if (dst >= n || src >= n) throw std::invalid_argument("neighbor_agreement: edge index out of range");
        ++degree[dst];
        const int diff = static_cast<int>(preds[dst]) - static_cast<int>(preds[src]);
        if (diff >= -1 && diff <= 1) ++agree[dst];
    }
    NeighborAgreement out;
    double sum = 0.0;
    int counted = 0;
    for (size_t i = 0; i < n; ++i) {
        if (degree[i] == 0) {
            ++out.isolated_nodes;
            continue;
        }
        sum += static_cast<double>(agree[i]) / static_cast<double>(degree[i]);
        ++counted;
    }
    out.value = counted ? sum / counted : 0.0;
    return out;
}

FoldPlan make_folds(int num_structures, int k, uint64_t seed) {
    if (k < 1 || num_structures < k) throw std::invalid_argument("make_folds: need at least k structure ids");
    std::vector<int> ids(num_structures);
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng(Rng::derive(seed, 0xf01d));
    shuffle(ids, rng);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.fold_of_structure.assign(num_structures, -1);
    for (int i = 0; i < num_structures; ++i) plan.fold_of_structure[ids[i]] = i % k;
    return plan;
}

FoldSplit fold_split(const FoldPlan& plan, int fold, double val_fraction) {
    if (fold < 0 || fold >= plan.k)
        throw std::invalid_argument("fold_split: fold " + std::to_string(fold) + " out of range for k=" +
                                    std::to_string(plan.k));
    FoldSplit split;
    std::vector<int> rest;
    for (int id = 0; id < static_cast<int>(plan.fold_of_structure.size()); ++id) {
        if (plan.fold_of_structure[id] == fold)
            split.test_ids.push_back(id);
        else
            rest.push_back(id);
    }
    Rng vrng(Rng::derive(plan.seed, 0x5a1u + static_cast<uint64_t>(fold)));
    shuffle(rest, vrng);
    size_t n_val = std::max<size_t>(1, static_cast<size_t>(std::llround(rest.size() * val_fraction)));
    if (n_val >= rest.size()) n_val = rest.size() > 1 ? rest.size() - 1 : 0;
    split.val_ids.assign(rest.begin(), rest.begin() + n_val);
    split.train_ids.assign(rest.begin() + n_val, rest.end());
    std::sort(split.val_ids.begin(), split.val_ids.end());
    std::sort(split.train_ids.begin(), split.train_ids.end());
    std::sort(split.test_ids.begin(), split.test_ids.end());
    return split;
}

}  // namespace cqa
