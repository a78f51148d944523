#include "curveclass/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "curveclass/errors.hpp"

namespace curveclass {

const PairCell* ComparisonTable::find(const std::string& a, const std::string& b,
                                      const std::string& sym) const {
    const auto key = a < b ? std::make_tuple(a, b, sym) : std::make_tuple(b, a, sym);
    const auto it = pairs.find(key);
    return it == pairs.end() ? nullptr : &it->second;
}

SampleSummary intra_stats(const Document& doc, const std::string& symbol,
                          std::span<const double> scores) {
    const auto it = doc.instances.find(symbol);
    const size_t n_inst = it == doc.instances.end() ? 0 : it->second.size();
    if (n_inst < 3) throw TooFewInstances("intra_stats: need >= 3 instances of " + symbol);
    const size_t expected = n_inst * (n_inst - 1) / 2;
    if (scores.size() != expected) throw Error("intra_stats: wrong number of pair scores");
    return summarize(scores);
}

SampleSummary inter_stats(const Document& docA, const Document& docB, const std::string& symbol,
                          std::span<const double> scores) {
    const auto ia = docA.instances.find(symbol);
    const auto ib = docB.instances.find(symbol);
    const size_t na = ia == docA.instances.end() ? 0 : ia->second.size();
    const size_t nb = ib == docB.instances.end() ? 0 : ib->second.size();
    if (na == 0 || nb == 0 || na * nb < 3) throw TooFewPairs("inter_stats: need >= 3 cross pairs");
    if (scores.size() != na * nb) throw Error("inter_stats: wrong number of pair scores");
    return summarize(scores);
}

PairTest pair_test(const SampleSummary& intra, const SampleSummary& inter) {
    PairTest t;
    t.t = welch_t(intra, inter);
    t.dof = welch_dof(intra, inter);
    t.p_two_tail = student_tail(t.t, t.dof);
    return t;
}

namespace {

// distinct symbols with at least one testable cell among the given pairs
int count_round_symbols(const ComparisonTable& table,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::set<std::string> syms;
    for (const auto& [a, b] : pairs)
        for (const std::string& sym : table.symbols)
            if (const PairCell* cell = table.find(a, b, sym); cell && cell->ok) syms.insert(sym);
    return static_cast<int>(syms.size());
}

}  // namespace

std::pair<std::vector<std::string>, std::vector<AlphaStep>> discover_hands(
    const ComparisonTable& table, double alpha_base) {
    if (!table.complete) throw IncompleteTable("discover_hands: comparison table incomplete");

    std::vector<std::string> reps;
    std::vector<AlphaStep> trace;
    std::vector<std::string> pool = table.documents;  // sorted

    // seed: the most discordant pair over all (pair, symbol) tests
    {
        std::vector<std::pair<std::string, std::string>> all_pairs;
        for (size_t i = 0; i < pool.size(); i++)
            for (size_t j = i + 1; j < pool.size(); j++) all_pairs.emplace_back(pool[i], pool[j]);

        double min_p = std::numeric_limits<double>::max();
        std::pair<std::string, std::string> seed_pair;
        for (const auto& [a, b] : all_pairs) {
            for (const std::string& sym : table.symbols) {
                const PairCell* cell = table.find(a, b, sym);
                if (!cell || !cell->ok) continue;
                if (cell->test.p_two_tail < min_p) {
                    min_p = cell->test.p_two_tail;
                    seed_pair = {a, b};
                }
            }
        }
        const int n_syms = count_round_symbols(table, all_pairs);
        const double threshold = n_syms > 0 ? alpha_base / n_syms : 0.0;

        AlphaStep step;
        step.round = 0;
        step.doc = seed_pair.first + "|" + seed_pair.second;
        step.alpha = min_p;
        step.threshold = threshold;
        step.promoted = min_p < threshold;
        trace.push_back(step);

        if (!(min_p < threshold)) return {reps, trace};  // every document in one hand

        reps.push_back(seed_pair.first);
        reps.push_back(seed_pair.second);
        std::erase(pool, seed_pair.first);
        std::erase(pool, seed_pair.second);
    }

    // iterate: promote the most discordant remaining document, if any
    for (int round = 1; !pool.empty(); round++) {
        std::vector<std::pair<std::string, std::string>> round_pairs;
        for (const std::string& doc : pool)
            for (const std::string& rep : reps) round_pairs.emplace_back(doc, rep);
        const int n_syms = count_round_symbols(table, round_pairs);
        const double threshold = n_syms > 0 ? alpha_base / n_syms : 0.0;

        std::string best_doc;
        double best_alpha = std::numeric_limits<double>::max();
        for (const std::string& doc : pool) {
            double alpha_i = std::numeric_limits<double>::max();
            for (const std::string& sym : table.symbols) {
                double worst = 0.0;  // max over representatives
                bool any = false;
                for (const std::string& rep : reps) {
                    const PairCell* cell = table.find(doc, rep, sym);
                    if (!cell || !cell->ok) continue;
                    worst = std::max(worst, cell->test.p_two_tail);
                    any = true;
                }
                if (any) alpha_i = std::min(alpha_i, worst);
            }
            if (alpha_i < best_alpha) {
                best_alpha = alpha_i;
                best_doc = doc;
            }
        }
        if (best_doc.empty()) break;

        AlphaStep step;
        step.round = round;
        step.doc = best_doc;
        step.alpha = best_alpha;
        step.threshold = threshold;
        step.promoted = best_alpha < threshold;
        trace.push_back(step);

        if (!step.promoted) break;
        reps.push_back(best_doc);
        std::erase(pool, best_doc);
    }
    return {reps, trace};
}

double likelihood(std::span<const PairTest> tests) {
    if (tests.empty()) throw NoCommonSymbols("likelihood: no common symbols");
    double log_acc = 0.0;
    for (const PairTest& t : tests) {
        const double f = student_pdf(t.t, t.dof);
        if (f <= 0.0) return 0.0;
        log_acc += std::log(f);
    }
    return std::exp(log_acc / static_cast<double>(tests.size()));
}

HandPartition attribute(const ComparisonTable& table, const std::vector<std::string>& representatives) {
    if (representatives.empty()) throw Error("attribute: need at least one representative");

    HandPartition partition;
    partition.representatives = representatives;
    for (size_t h = 0; h < representatives.size(); h++)
        partition.assignment[representatives[h]] = static_cast<int>(h);

    for (const std::string& doc : table.documents) {
        if (partition.assignment.count(doc)) continue;

        std::vector<double> g(representatives.size(), -1.0);
        bool any = false;
        for (size_t h = 0; h < representatives.size(); h++) {
            std::vector<PairTest> tests;
            for (const std::string& sym : table.symbols) {
                const PairCell* cell = table.find(doc, representatives[h], sym);
                if (cell && cell->ok) tests.push_back(cell->test);
            }
            if (tests.empty()) continue;
            g[h] = likelihood(tests);
            any = true;
        }
        partition.likelihoods[doc] = g;
        if (!any) {
            partition.unassigned.push_back(doc);
            partition.notes.push_back(doc + ": no common symbols with any representative");
            continue;
        }
        int best = 0;
        for (size_t h = 1; h < representatives.size(); h++)
            if (g[h] > g[best]) best = static_cast<int>(h);
        // equal likelihoods: keep the lowest hand index
        for (size_t h = 0; h < representatives.size(); h++) {
            if (static_cast<int>(h) != best && g[h] == g[best] && g[h] >= 0.0) {
                partition.notes.push_back(doc + ": likelihood tie between hands, keeping lowest index");
                break;
            }
        }
        partition.assignment[doc] = best;
    }
    return partition;
}

HandPartition classify_documents(const ComparisonTable& table, double alpha_base) {
    auto [reps, trace] = discover_hands(table, alpha_base);
    HandPartition partition;
    if (reps.empty()) {
        // single hand covering everything; first document is the exemplar
        if (table.documents.empty()) throw IncompleteTable("classify_documents: no documents");
        partition.representatives = {table.documents.front()};
        for (const std::string& doc : table.documents) partition.assignment[doc] = 0;
    } else {
        partition = attribute(table, reps);
    }
    partition.alpha_trace = std::move(trace);
    return partition;
}

size_t ScoreMatrix::tri_index(int i, int j, int n) {
    // i < j
    return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i + 1) / 2 + (j - i - 1);
}

double ScoreMatrix::at(int i, int j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return xi[tri_index(i, j, n)];
}

void ScoreMatrix::set(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    xi[tri_index(i, j, n)] = v;
}

namespace {

constexpr const char* kShapeSymbol = "shape";

ComparisonTable table_from_groups(const std::vector<ShapeGroup>& groups, const ScoreMatrix& scores,
                                  bool distribution_gate, std::vector<std::string>& notes) {
    ComparisonTable table;
    table.symbols = {kShapeSymbol};
    for (const ShapeGroup& g : groups) table.documents.push_back(g.id);
    std::sort(table.documents.begin(), table.documents.end());

    std::map<std::string, const ShapeGroup*> by_id;
    for (const ShapeGroup& g : groups) by_id[g.id] = &g;

    for (const std::string& id : table.documents) {
        const ShapeGroup& g = *by_id[id];
        if (g.members.size() < 3) continue;
        std::vector<double> vals;
        for (size_t i = 0; i < g.members.size(); i++)
            for (size_t j = i + 1; j < g.members.size(); j++)
                vals.push_back(scores.at(g.members[i], g.members[j]));
        table.intra[{id, kShapeSymbol}] = summarize(vals);
        if (distribution_gate && vals.size() >= 8) {
            try {
                auto [stat, pass] = ks_normality(vals);
                if (!pass)
                    notes.push_back(id + ": KS normality gate failed (statistic " +
                                    std::to_string(stat) + ")");
            } catch (const Error&) {
                // constant scores; the zero-variance note comes from the pair test
            }
        }
    }

    for (size_t a = 0; a < table.documents.size(); a++) {
        for (size_t b = a + 1; b < table.documents.size(); b++) {
            const ShapeGroup& ga = *by_id[table.documents[a]];
            const ShapeGroup& gb = *by_id[table.documents[b]];
            PairCell cell;
            const auto intra_it = table.intra.find({ga.id, kShapeSymbol});
            if (intra_it == table.intra.end() || gb.members.empty()) {
                cell.note = "too few instances";
            } else {
                std::vector<double> cross;
                for (int i : ga.members)
                    for (int j : gb.members) cross.push_back(scores.at(i, j));
                cell.intra_ref = intra_it->second;
                cell.inter = summarize(cross);
                try {
                    cell.test = pair_test(cell.intra_ref, cell.inter);
                    cell.ok = true;
                } catch (const Error& e) {
                    cell.note = e.what();
                }
            }
            table.pairs[{ga.id, gb.id, kShapeSymbol}] = cell;
        }
    }
    table.complete = true;
    return table;
}

HandPartition nearest_mean_assignment(const std::vector<ShapeGroup>& groups,
                                      const ScoreMatrix& scores) {
    HandPartition partition;
    for (const ShapeGroup& g : groups) partition.representatives.push_back(g.id);

    for (size_t h = 0; h < groups.size(); h++) {
        for (size_t k = 0; k < groups[h].members.size(); k++) {
            const int inst = groups[h].members[k];
            int best = -1;
            double best_err = std::numeric_limits<double>::max();
            for (size_t c = 0; c < groups.size(); c++) {
                double acc = 0.0;
                int cnt = 0;
                for (int other : groups[c].members) {
                    if (other == inst) continue;  // leave-one-out
                    acc += scores.at(inst, other);
                    cnt++;
                }
                if (cnt == 0) continue;
                const double mean = acc / cnt;
                if (mean < best_err) {
                    best_err = mean;
                    best = static_cast<int>(c);
                }
            }
            const std::string inst_id = groups[h].id + "/" + std::to_string(k);
            if (best < 0) partition.unassigned.push_back(inst_id);
            else partition.assignment[inst_id] = best;
        }
    }
    return partition;
}

}  // namespace

HandPartition classify_generic(const std::vector<ShapeGroup>& groups, const ScoreMatrix& scores,
                               double alpha_base, bool distribution_gate, GenericMode mode) {
    if (groups.empty()) throw Error("classify_generic: no groups");
    if (mode == GenericMode::kNearestMeanError) return nearest_mean_assignment(groups, scores);

    std::vector<std::string> notes;
    ComparisonTable table = table_from_groups(groups, scores, distribution_gate, notes);
    HandPartition partition = classify_documents(table, alpha_base);
    for (std::string& n : notes) partition.notes.push_back(std::move(n));
    return partition;
}

}  // namespace curveclass
