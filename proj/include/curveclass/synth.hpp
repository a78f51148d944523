#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curveclass/contour.hpp"

namespace curveclass {

// Deterministic uniform double in [lo, hi) from raw generator bits; identical
// across platforms for a given seed.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    uint64_t next();
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);  // inclusive bounds

  private:
    uint64_t state_;
};

struct SynthConfig {
    int hands = 3;
    int docs_per_hand = 4;
    int symbols = 5;
    int instances_per_symbol = 8;
    double noise = 0.03;          // radial noise amplitude relative to base radius
    double base_radius = 60.0;    // prototype size in pixels
    bool identity_transforms = false;  // disable per-instance affine jitter
    uint64_t seed = 1;
};

struct SynthCorpus {
    std::vector<Document> documents;
    std::vector<int> true_hand;   // per document
    std::vector<std::string> symbol_labels;
};

// Per (hand, symbol): a random smooth closed prototype (low-order Fourier
// radius profile). Per instance: radial noise plus random anisotropic scale
// in [0.8, 1.25], rotation, translation.
SynthCorpus generate_corpus(const SynthConfig& config);

// Writes contour CSVs, one manifest per document, a corpus manifest and a
// ground-truth JSON under dir. Returns the corpus manifest path.
std::string write_corpus(const SynthCorpus& corpus, const std::string& dir);

// single smooth prototype loop (exposed for tests and benches)
Contour fourier_prototype(Rng& rng, double base_radius, int n_points);

// one noisy, affinely jittered realization of a prototype
Contour synth_instance(const Contour& prototype, Rng& rng, const SynthConfig& config);

}  // namespace curveclass
