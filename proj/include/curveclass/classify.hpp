#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "curveclass/contour.hpp"
#include "curveclass/stats.hpp"

namespace curveclass {

// One tested (docA, docB, symbol) cell: the reference document's intra
// sample against the cross sample, plus the resulting test. Cells that
// could not be tested (zero variance, too few instances) carry ok = false.
struct PairCell {
    SampleSummary intra_ref;
    SampleSummary inter;
    PairTest test;
    bool ok = false;
    std::string note;
};

struct ComparisonTable {
    std::vector<std::string> documents;                              // sorted ids
    std::vector<std::string> symbols;                                // sorted labels
    std::map<std::pair<std::string, std::string>, SampleSummary> intra;  // (doc, symbol)
    // key: (docA, docB, symbol), docA < docB lexicographically
    std::map<std::tuple<std::string, std::string, std::string>, PairCell> pairs;
    bool complete = false;

    const PairCell* find(const std::string& a, const std::string& b, const std::string& sym) const;
};

struct AlphaStep {
    int round = 0;
    std::string doc;       // candidate with the minimal alpha this round
    double alpha = 1.0;
    double threshold = 0.0;
    bool promoted = false;
};

struct HandPartition {
    std::vector<std::string> representatives;       // one per hand, in discovery order
    std::map<std::string, int> assignment;          // doc id -> hand index
    std::map<std::string, std::vector<double>> likelihoods;  // doc id -> per-hand values
    std::vector<std::string> unassigned;
    std::vector<AlphaStep> alpha_trace;
    std::vector<std::string> notes;
};

// mean/sd/n over the N(N-1)/2 intra-document pair scores
SampleSummary intra_stats(const Document& doc, const std::string& symbol,
                          std::span<const double> scores);

// mean/sd/n over the N1*N2 cross-document pair scores
SampleSummary inter_stats(const Document& docA, const Document& docB, const std::string& symbol,
                          std::span<const double> scores);

PairTest pair_test(const SampleSummary& intra, const SampleSummary& inter);

// Iterative representative discovery. The per-round rejection threshold is
// alpha_base divided by the number of distinct symbols tested that round.
std::pair<std::vector<std::string>, std::vector<AlphaStep>> discover_hands(
    const ComparisonTable& table, double alpha_base);

// Geometric mean of Student densities over the common-symbol tests.
double likelihood(std::span<const PairTest> tests);

// Maximum-likelihood attribution of non-representative documents.
HandPartition attribute(const ComparisonTable& table, const std::vector<std::string>& representatives);

// full pipeline over a precomputed table
HandPartition classify_documents(const ComparisonTable& table, double alpha_base);

// ---- generic property-based grouping over arbitrary shape ensembles ----

struct ShapeGroup {
    std::string id;
    std::vector<int> members;  // indices into the instance array the scores were built from
};

// canonical-direction xi scores for instance pairs i < j
struct ScoreMatrix {
    int n = 0;
    std::vector<double> xi;  // upper triangle, row-major

    double at(int i, int j) const;
    void set(int i, int j, double v);
    static size_t tri_index(int i, int j, int n);
};

enum class GenericMode { kStatistical, kNearestMeanError };

// Shape groups as single-symbol documents through the same pipeline; the
// nearest-mean-error mode instead re-assigns every instance (leave-one-out)
// to the group with the best average fitting error.
HandPartition classify_generic(const std::vector<ShapeGroup>& groups, const ScoreMatrix& scores,
                               double alpha_base, bool distribution_gate,
                               GenericMode mode = GenericMode::kStatistical);

}  // namespace curveclass
