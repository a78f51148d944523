#pragma once

#include <string>
#include <vector>

#include "curveclass/contour.hpp"

namespace curveclass {

// CSV with header `x,y`, one vertex per row, 9 significant digits.
Contour load_contour_csv(const std::string& path);
void save_contour_csv(const Contour& c, const std::string& path);

// JSON array of [x, y] pairs.
Contour load_contour_json(const std::string& path);
void save_contour_json(const Contour& c, const std::string& path);

// picks by extension (.csv / .json), contour id defaults to the stem
Contour load_contour(const std::string& path);

// Document manifest: { "id": str, "symbols": { label: [contour file paths] } }
// Relative paths resolve against the manifest's directory.
Document load_document(const std::string& manifest_path);

// Corpus manifest: { "documents": [document manifest paths] }
std::vector<Document> load_corpus(const std::string& manifest_path);

}  // namespace curveclass
