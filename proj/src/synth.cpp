#include "curveclass/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "curveclass/contour_io.hpp"
#include "curveclass/errors.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace curveclass {

uint64_t Rng::next() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
}

Contour fourier_prototype(Rng& rng, double base_radius, int n_points) {
    // radius profile r(theta) = R (1 + sum_k c_k cos(k theta + phi_k)),
    // low harmonics only, kept star-shaped
    constexpr int kHarmonics = 5;
    double coef[kHarmonics], phase[kHarmonics];
    for (int k = 0; k < kHarmonics; k++) {
        coef[k] = rng.uniform(0.04, 0.22) / (1.0 + 0.5 * k);
        phase[k] = rng.uniform(0.0, 2.0 * M_PI);
    }
    Contour c;
    c.points.reserve(n_points);
    for (int i = 0; i < n_points; i++) {
        const double theta = 2.0 * M_PI * i / n_points;
        double r = 1.0;
        for (int k = 0; k < kHarmonics; k++) r += coef[k] * std::cos((k + 2) * theta + phase[k]);
        r *= base_radius;
        c.points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    normalize_orientation(c);
    return c;
}

Contour synth_instance(const Contour& prototype, Rng& rng, const SynthConfig& config) {
    // smooth radial noise so the loop stays simple
    constexpr int kNoiseHarmonics = 6;
    double coef[kNoiseHarmonics], phase[kNoiseHarmonics];
    for (int k = 0; k < kNoiseHarmonics; k++) {
        coef[k] = rng.uniform(-1.0, 1.0);
        phase[k] = rng.uniform(0.0, 2.0 * M_PI);
    }
    const double sa = config.identity_transforms ? 1.0 : rng.uniform(0.8, 1.25);
    const double sb = config.identity_transforms ? 1.0 : rng.uniform(0.8, 1.25);
    const double rot = config.identity_transforms ? 0.0 : rng.uniform(-M_PI, M_PI);
    const double tx = config.identity_transforms ? 0.0 : rng.uniform(0.0, 40.0);
    const double ty = config.identity_transforms ? 0.0 : rng.uniform(0.0, 40.0);

    const Vec2 cen = centroid(prototype);
    Contour out;
    out.points.reserve(prototype.size());
    const size_t n = prototype.size();
    for (size_t i = 0; i < n; i++) {
        const double theta = 2.0 * M_PI * i / n;
        double bump = 0.0;
        for (int k = 0; k < kNoiseHarmonics; k++) bump += coef[k] * std::cos((k + 1) * theta + phase[k]);
        const Vec2 radial = prototype[i] - cen;
        const Vec2 noisy = cen + radial * (1.0 + config.noise * bump / kNoiseHarmonics);
        Vec2 p{(noisy.x - cen.x) * sa, (noisy.y - cen.y) * sb};
        p = p.rotated(rot);
        out.points.push_back({p.x + cen.x + tx, p.y + cen.y + ty});
    }
    normalize_orientation(out);
    return out;
}

SynthCorpus generate_corpus(const SynthConfig& config) {
    if (config.hands < 1 || config.docs_per_hand < 1 || config.symbols < 1 ||
        config.instances_per_symbol < 1)
        throw Error("generate_corpus: all counts must be >= 1");

    SynthCorpus corpus;
    for (int s = 0; s < config.symbols; s++)
        corpus.symbol_labels.push_back("sym" + std::to_string(s));

    // one prototype per (hand, symbol), seeded independently of instance noise
    std::vector<std::vector<Contour>> prototypes(config.hands);
    for (int h = 0; h < config.hands; h++) {
        for (int s = 0; s < config.symbols; s++) {
            Rng proto_rng(config.seed * 1000003ull + static_cast<uint64_t>(h) * 613ull +
                          static_cast<uint64_t>(s) * 7919ull + 17ull);
            prototypes[h].push_back(fourier_prototype(proto_rng, config.base_radius, 256));
        }
    }

    for (int h = 0; h < config.hands; h++) {
        for (int d = 0; d < config.docs_per_hand; d++) {
            Document doc;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "doc%02d", h * config.docs_per_hand + d);
            doc.id = buf;
            for (int s = 0; s < config.symbols; s++) {
                Rng inst_rng(config.seed * 1000003ull + 999983ull +
                             static_cast<uint64_t>(h) * 100003ull + static_cast<uint64_t>(d) * 1009ull +
                             static_cast<uint64_t>(s) * 31ull);
                auto& list = doc.instances[corpus.symbol_labels[s]];
                for (int k = 0; k < config.instances_per_symbol; k++) {
                    Contour inst = synth_instance(prototypes[h][s], inst_rng, config);
                    inst.id = doc.id + "/" + corpus.symbol_labels[s] + "/" + std::to_string(k);
                    list.push_back(std::move(inst));
                }
            }
            corpus.documents.push_back(std::move(doc));
            corpus.true_hand.push_back(h);
        }
    }
    return corpus;
}

std::string write_corpus(const SynthCorpus& corpus, const std::string& dir) {
    fs::create_directories(dir);

    ordered_json corpus_manifest;
    corpus_manifest["documents"] = ordered_json::array();

    for (const Document& doc : corpus.documents) {
        const fs::path doc_dir = fs::path(dir) / doc.id;
        fs::create_directories(doc_dir);

        ordered_json manifest;
        manifest["id"] = doc.id;
        manifest["symbols"] = ordered_json::object();
        for (const auto& [sym, insts] : doc.instances) {
            ordered_json files = ordered_json::array();
            for (size_t k = 0; k < insts.size(); k++) {
                const std::string name = sym + "_" + std::to_string(k) + ".csv";
                save_contour_csv(insts[k], (doc_dir / name).string());
                files.push_back(doc.id + "/" + name);
            }
            manifest["symbols"][sym] = files;
        }
        const std::string manifest_path = (fs::path(dir) / (doc.id + ".json")).string();
        std::ofstream out(manifest_path);
        out << manifest.dump(2) << "\n";
        corpus_manifest["documents"].push_back(doc.id + ".json");
    }

    ordered_json truth;
    truth["hands"] = ordered_json::array();
    for (size_t i = 0; i < corpus.documents.size(); i++) {
        ordered_json e;
        e["doc"] = corpus.documents[i].id;
        e["hand"] = corpus.true_hand[i];
        truth["hands"].push_back(e);
    }
    {
        std::ofstream out(fs::path(dir) / "ground_truth.json");
        out << truth.dump(2) << "\n";
    }

    const std::string corpus_path = (fs::path(dir) / "corpus.json").string();
    std::ofstream out(corpus_path);
    out << corpus_manifest.dump(2) << "\n";
    return corpus_path;
}

}  // namespace curveclass
