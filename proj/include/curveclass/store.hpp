#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curveclass/classify.hpp"
#include "curveclass/contour.hpp"
#include "curveclass/registration.hpp"
#include "curveclass/similarity.hpp"

namespace curveclass {

// Canonically ordered pair key: (doc_a, idx_a) <= (doc_b, idx_b).
struct ComparisonKey {
    std::string doc_a;
    std::string sym;
    int idx_a = 0;
    std::string doc_b;
    int idx_b = 0;

    ComparisonKey canonical() const;
    bool is_canonical() const;
    auto tied() const { return std::tie(doc_a, sym, idx_a, doc_b, idx_b); }
    bool operator<(const ComparisonKey& o) const { return tied() < o.tied(); }
    bool operator==(const ComparisonKey& o) const { return tied() == o.tied(); }
};

struct ComparisonRecord {
    ComparisonKey key;
    MatchOutcome outcome;
    SimilarityScore score;
    std::string engine_version;
    std::string ts;

    std::string to_jsonl(bool with_xi = true) const;
    static ComparisonRecord from_jsonl(const std::string& line);
    bool same_payload(const ComparisonRecord& o) const;  // ts excluded
};

// Append-only JSONL store of pairwise comparison results with an in-memory
// index. Concurrent readers are safe; all writes go through put() on one
// thread.
class Store {
  public:
    explicit Store(std::string path);

    // durable append; duplicate identical payload is a no-op
    void put(const ComparisonRecord& record);
    std::optional<ComparisonRecord> get(const ComparisonKey& key) const;

    size_t size() const { return index_.size(); }
    const std::map<ComparisonKey, ComparisonRecord>& records() const { return index_; }
    const std::string& path() const { return path_; }

  private:
    void load();

    std::string path_;
    std::map<ComparisonKey, ComparisonRecord> index_;
};

struct BatchConfig {
    EngineConfig engine;
    double alpha_base = 1e-4;
    double rho_fixed = 0.0;  // <= 0 means calibrate from the batch
    std::string engine_version;
    std::string timestamp;   // written into every record
};

struct BatchResult {
    ComparisonTable table;
    double rho = 1.0;
    size_t computed = 0;  // pairs actually matched this run
    size_t reused = 0;    // pairs loaded from the store or progress file
    std::vector<std::string> failures;
};

// Computes every intra/inter pair required by the classification pipeline
// that is not already in the store, with `parallelism` worker threads, and
// assembles the comparison table. Raw outcomes are checkpointed to
// <store>.progress.jsonl so an interrupted batch resumes without recomputing;
// final records land in the store sorted by key once the batch is complete.
BatchResult run_batch(const std::vector<Document>& documents, const BatchConfig& config,
                      int parallelism, Store& store);

}  // namespace curveclass
