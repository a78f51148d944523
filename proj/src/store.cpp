#include "curveclass/store.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "curveclass/errors.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace curveclass {

ComparisonKey ComparisonKey::canonical() const {
    if (std::tie(doc_a, idx_a) <= std::tie(doc_b, idx_b)) return *this;
    ComparisonKey k = *this;
    std::swap(k.doc_a, k.doc_b);
    std::swap(k.idx_a, k.idx_b);
    return k;
}

bool ComparisonKey::is_canonical() const {
    return std::tie(doc_a, idx_a) <= std::tie(doc_b, idx_b);
}

std::string ComparisonRecord::to_jsonl(bool with_xi) const {
    ordered_json j;
    j["doc_a"] = key.doc_a;
    j["sym"] = key.sym;
    j["idx_a"] = key.idx_a;
    j["doc_b"] = key.doc_b;
    j["idx_b"] = key.idx_b;
    j["a"] = outcome.state.a;
    j["b"] = outcome.state.b;
    j["T"] = outcome.state.T;
    j["gx"] = outcome.state.gx;
    j["gy"] = outcome.state.gy;
    j["zeta_min"] = outcome.zeta_min;
    j["eps1"] = outcome.eps1;
    j["euclid_min"] = outcome.euclid_min;
    j["len1"] = outcome.len1;
    j["len2"] = outcome.len2;
    j["zeta_s"] = score.zeta_s;
    j["theta_m"] = score.theta_m;
    j["xi"] = with_xi ? score.xi : 0.0;
    j["converged"] = outcome.converged;
    j["engine_version"] = engine_version;
    j["ts"] = ts;
    return j.dump();
}

ComparisonRecord ComparisonRecord::from_jsonl(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const ordered_json::exception& e) {
        throw IoFailure(std::string("bad store line: ") + e.what());
    }
    ComparisonRecord r;
    r.key.doc_a = j.at("doc_a").get<std::string>();
    r.key.sym = j.at("sym").get<std::string>();
    r.key.idx_a = j.at("idx_a").get<int>();
    r.key.doc_b = j.at("doc_b").get<std::string>();
    r.key.idx_b = j.at("idx_b").get<int>();
    r.outcome.state.a = j.at("a").get<double>();
    r.outcome.state.b = j.at("b").get<double>();
    r.outcome.state.T = j.at("T").get<double>();
    r.outcome.state.gx = j.at("gx").get<double>();
    r.outcome.state.gy = j.at("gy").get<double>();
    r.outcome.zeta_min = j.at("zeta_min").get<double>();
    r.outcome.eps1 = j.at("eps1").get<double>();
    r.outcome.euclid_min = j.at("euclid_min").get<double>();
    r.outcome.len1 = j.at("len1").get<double>();
    r.outcome.len2 = j.at("len2").get<double>();
    r.score.zeta_s = j.at("zeta_s").get<double>();
    r.score.theta_m = j.at("theta_m").get<double>();
    r.score.xi = j.at("xi").get<double>();
    r.outcome.converged = j.at("converged").get<bool>();
    r.engine_version = j.at("engine_version").get<std::string>();
    r.ts = j.at("ts").get<std::string>();
    return r;
}

bool ComparisonRecord::same_payload(const ComparisonRecord& o) const {
    auto strip_ts = [](const ComparisonRecord& r) {
        ComparisonRecord c = r;
        c.ts.clear();
        return c.to_jsonl();
    };
    return strip_ts(*this) == strip_ts(o);
}

Store::Store(std::string path) : path_(std::move(path)) { load(); }

void Store::load() {
    std::ifstream in(path_);
    if (!in) return;  // fresh store
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ComparisonRecord r = ComparisonRecord::from_jsonl(line);
        index_[r.key] = std::move(r);
    }
}

void Store::put(const ComparisonRecord& record) {
    if (!record.key.is_canonical()) throw Error("Store::put: key not canonical");
    const auto it = index_.find(record.key);
    if (it != index_.end()) {
        if (it->second.same_payload(record)) return;  // idempotent
        throw ConflictingRecord("Store::put: key exists with different payload");
    }
    std::ofstream out(path_, std::ios::app);
    if (!out) throw IoFailure("Store::put: cannot open " + path_);
    out << record.to_jsonl() << "\n";
    out.flush();
    if (!out) throw IoFailure("Store::put: write failed");
    index_[record.key] = record;
}

std::optional<ComparisonRecord> Store::get(const ComparisonKey& key) const {
    const auto it = index_.find(key.canonical());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

struct Task {
    ComparisonKey key;
    const Contour* c1 = nullptr;
    const Contour* c2 = nullptr;
};

// symbols usable for a pair test need >= 3 instances on both sides
bool symbol_testable(const Document& doc, const std::string& sym) {
    const auto it = doc.instances.find(sym);
    if (it == doc.instances.end()) return false;
    size_t live = 0;
    for (const Contour& c : it->second) live += !c.points.empty();
    return live >= 3;
}

}  // namespace

BatchResult run_batch(const std::vector<Document>& documents, const BatchConfig& config,
                      int parallelism, Store& store) {
    if (parallelism < 1) parallelism = 1;

    std::vector<const Document*> docs;
    for (const Document& d : documents) docs.push_back(&d);
    std::sort(docs.begin(), docs.end(),
              [](const Document* a, const Document* b) { return a->id < b->id; });

    // enumerate every pair the pipeline consumes, sorted by key
    std::vector<Task> tasks;
    std::set<std::string> symbols;
    for (size_t di = 0; di < docs.size(); di++) {
        const Document& d = *docs[di];
        for (const auto& [sym, insts] : d.instances) {
            if (!symbol_testable(d, sym)) continue;
            symbols.insert(sym);
            for (size_t i = 0; i < insts.size(); i++) {
                if (insts[i].points.empty()) continue;
                for (size_t j = i + 1; j < insts.size(); j++) {
                    if (insts[j].points.empty()) continue;
                    tasks.push_back({{d.id, sym, static_cast<int>(i), d.id, static_cast<int>(j)},
                                     &insts[i], &insts[j]});
                }
            }
        }
    }
    for (size_t a = 0; a < docs.size(); a++) {
        for (size_t b = a + 1; b < docs.size(); b++) {
            for (const std::string& sym : symbols) {
                if (!symbol_testable(*docs[a], sym) || !symbol_testable(*docs[b], sym)) continue;
                const auto& ia = docs[a]->instances.at(sym);
                const auto& ib = docs[b]->instances.at(sym);
                for (size_t i = 0; i < ia.size(); i++) {
                    if (ia[i].points.empty()) continue;
                    for (size_t j = 0; j < ib.size(); j++) {
                        if (ib[j].points.empty()) continue;
                        tasks.push_back({{docs[a]->id, sym, static_cast<int>(i), docs[b]->id,
                                          static_cast<int>(j)},
                                         &ia[i], &ib[j]});
                    }
                }
            }
        }
    }
    std::sort(tasks.begin(), tasks.end(), [](const Task& x, const Task& y) { return x.key < y.key; });

    // resume state: completed records in the store, raw outcomes in progress
    const std::string progress_path = store.path() + ".progress.jsonl";
    std::map<ComparisonKey, ComparisonRecord> raw;
    {
        std::ifstream in(progress_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            ComparisonRecord r = ComparisonRecord::from_jsonl(line);
            raw[r.key] = std::move(r);
        }
    }

    BatchResult result;
    std::vector<size_t> pending;
    for (size_t i = 0; i < tasks.size(); i++) {
        if (store.get(tasks[i].key) || raw.count(tasks[i].key)) result.reused++;
        else pending.push_back(i);
    }

    // worker pool; one writer sequence for the progress checkpoint
    std::mutex sink_mutex;
    std::ofstream progress_out;
    if (!pending.empty()) {
        progress_out.open(progress_path, std::ios::app);
        if (!progress_out) throw IoFailure("run_batch: cannot open " + progress_path);
    }
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            const size_t slot = cursor.fetch_add(1);
            if (slot >= pending.size()) break;
            const Task& task = tasks[pending[slot]];
            try {
                ComparisonRecord r;
                r.key = task.key;
                r.outcome = match(*task.c1, *task.c2, config.engine);
                r.score.zeta_s = curvature_similarity(r.outcome.zeta_min, r.outcome.eps1);
                r.score.theta_m =
                    euclidean_similarity(r.outcome.euclid_min, r.outcome.len1, r.outcome.len2);
                r.engine_version = config.engine_version;
                r.ts = config.timestamp;
                std::lock_guard lock(sink_mutex);
                progress_out << r.to_jsonl(false) << "\n";
                progress_out.flush();
                raw[r.key] = std::move(r);
                result.computed++;
            } catch (const std::exception& e) {
                std::lock_guard lock(sink_mutex);
                result.failures.push_back(task.key.doc_a + "/" + task.key.sym + "/" +
                                          std::to_string(task.key.idx_a) + " vs " + task.key.doc_b +
                                          "/" + std::to_string(task.key.idx_b) + ": " + e.what());
            }
        }
    };
    {
        std::vector<std::thread> threads;
        for (int t = 0; t < parallelism; t++) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (progress_out.is_open()) progress_out.close();

    // resolve rho over the complete batch
    std::vector<std::pair<double, double>> calib;
    for (const Task& task : tasks) {
        if (const auto rec = store.get(task.key)) calib.emplace_back(rec->score.zeta_s, rec->score.theta_m);
        else if (const auto it = raw.find(task.key); it != raw.end())
            calib.emplace_back(it->second.score.zeta_s, it->second.score.theta_m);
    }
    if (config.rho_fixed > 0.0) {
        result.rho = config.rho_fixed;
    } else {
        try {
            result.rho = calibrate_rho(calib);
        } catch (const InsufficientSample&) {
            result.rho = 1.0;
        }
    }

    // final append, sorted by key; the progress file becomes redundant
    for (const Task& task : tasks) {
        if (store.get(task.key)) continue;
        const auto it = raw.find(task.key);
        if (it == raw.end()) continue;  // failed pair
        ComparisonRecord r = it->second;
        r.score = overall_similarity(r.score.zeta_s, r.score.theta_m, result.rho);
        store.put(r);
    }
    if (fs::exists(progress_path)) fs::remove(progress_path);

    // assemble the comparison table from the store
    ComparisonTable& table = result.table;
    for (const Document* d : docs) table.documents.push_back(d->id);
    table.symbols.assign(symbols.begin(), symbols.end());

    bool all_cells_ok = true;
    auto xi_of = [&](const ComparisonKey& key) -> std::optional<double> {
        const auto rec = store.get(key);
        if (!rec) return std::nullopt;
        return rec->score.zeta_s + result.rho * rec->score.theta_m;
    };

    for (const Document* d : docs) {
        for (const std::string& sym : table.symbols) {
            if (!symbol_testable(*d, sym)) continue;
            const auto& insts = d->instances.at(sym);
            std::vector<double> scores;
            size_t expected = 0;
            for (size_t i = 0; i < insts.size(); i++) {
                if (insts[i].points.empty()) continue;
                for (size_t j = i + 1; j < insts.size(); j++) {
                    if (insts[j].points.empty()) continue;
                    expected++;
                    const auto xi = xi_of({d->id, sym, static_cast<int>(i), d->id, static_cast<int>(j)});
                    if (xi) scores.push_back(*xi);
                }
            }
            if (scores.size() < 3) { all_cells_ok &= scores.size() == expected; continue; }
            table.intra[{d->id, sym}] = summarize(scores);
        }
    }

    for (size_t a = 0; a < docs.size(); a++) {
        for (size_t b = a + 1; b < docs.size(); b++) {
            for (const std::string& sym : table.symbols) {
                if (!symbol_testable(*docs[a], sym) || !symbol_testable(*docs[b], sym)) continue;
                PairCell cell;
                const auto intra_it = table.intra.find({docs[a]->id, sym});
                std::vector<double> cross;
                const auto& ia = docs[a]->instances.at(sym);
                const auto& ib = docs[b]->instances.at(sym);
                for (size_t i = 0; i < ia.size(); i++) {
                    if (ia[i].points.empty()) continue;
                    for (size_t j = 0; j < ib.size(); j++) {
                        if (ib[j].points.empty()) continue;
                        const auto xi = xi_of({docs[a]->id, sym, static_cast<int>(i), docs[b]->id,
                                               static_cast<int>(j)});
                        if (xi) cross.push_back(*xi);
                    }
                }
                if (intra_it == table.intra.end() || cross.size() < 3) {
                    cell.note = "insufficient scores";
                    all_cells_ok = false;
                } else {
                    cell.intra_ref = intra_it->second;
                    cell.inter = summarize(cross);
                    try {
                        cell.test = pair_test(cell.intra_ref, cell.inter);
                        cell.ok = true;
                    } catch (const Error& e) {
                        cell.note = e.what();
                    }
                }
                table.pairs[{docs[a]->id, docs[b]->id, sym}] = cell;
            }
        }
    }
    table.complete = result.failures.empty() && all_cells_ok;
    return result;
}

}  // namespace curveclass
