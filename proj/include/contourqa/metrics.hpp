#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace cqa {

// 5x5 counts, rows = true class, columns = predicted class.
struct ConfusionMatrix5 {
    std::array<std::array<uint64_t, 5>, 5> counts{};

    uint64_t total() const;
    std::optional<double> recall(int true_class) const;     // diagonal / row sum
    std::optional<double> precision(int pred_class) const;  // diagonal / column sum
    double accuracy() const;
    double macro_recall() const;  // mean recall over classes with support
    ConfusionMatrix5& operator+=(const ConfusionMatrix5& o);
};

ConfusionMatrix5 confusion(const std::vector<uint8_t>& preds, const std::vector<uint8_t>& truths);

// Precision/recall of the two edge classes (0: internal, 4: external).
// Precision credits a prediction of an edge class when the true class is an error of
// the same sign (true in {0,1} for predicted 0; true in {3,4} for predicted 4); recall
// is strict (exact class match). When `raw_sign_rule` is set, precision instead credits
// any true signed distance of matching sign.
// Precision is absent (not 0) when the class was never predicted.
struct EdgeClassPR {
    std::optional<double> precision;
    double recall = 0.0;
    uint64_t predicted = 0;  // number of predictions of the edge class
    uint64_t support = 0;    // number of true members of the edge class
};

struct EdgePRReport {
    EdgeClassPR internal;  // class 0
    EdgeClassPR external;  // class 4
};

EdgePRReport edge_precision_recall(const std::vector<uint8_t>& preds, const std::vector<uint8_t>& truths,
                                   const std::vector<float>& signed_distances, bool raw_sign_rule = false);

// Mean over non-isolated nodes of the per-node fraction of neighbors whose class
// differs by at most 1.
struct NeighborAgreement {
    double value = 0.0;
    int isolated_nodes = 0;
};

NeighborAgreement neighbor_agreement(const std::vector<std::array<uint32_t, 2>>& directed_edges,
                                     const std::vector<uint8_t>& preds);

// k-fold assignment of structure ids: shuffle by seed, deal round-robin. All
// perturbations of a structure inherit its fold.
struct FoldPlan {
    int k = 5;
    uint64_t seed = 0;
    std::vector<int> fold_of_structure;  // index = structure id
};

FoldPlan make_folds(int num_structures, int k, uint64_t seed);

// Splits for one fold: test = fold i, validation = ~1/9 of the rest, train = remainder.
struct FoldSplit {
    std::vector<int> train_ids, val_ids, test_ids;
};

FoldSplit fold_split(const FoldPlan& plan, int fold, double val_fraction = 1.0 / 9.0);

}  // namespace cqa
