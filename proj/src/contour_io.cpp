#include "curveclass/contour_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "curveclass/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace curveclass {

namespace {

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::string format9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

Contour load_contour_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoFailure("empty contour file: " + path);
    // header row `x,y` required
    if (line.rfind("x,y", 0) != 0) throw IoFailure("missing x,y header: " + path);

    Contour c;
    c.id = stem_of(path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoFailure("malformed CSV row in " + path);
        c.points.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    if (c.size() < 3) throw TooFewPoints("contour has fewer than 3 points: " + path);
    normalize_orientation(c);
    return c;
}

void save_contour_csv(const Contour& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << "x,y\n";
    for (const Vec2& p : c.points) out << format9(p.x) << "," << format9(p.y) << "\n";
    if (!out) throw IoFailure("write failed: " + path);
}

Contour load_contour_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoFailure("bad JSON in " + path + ": " + e.what());
    }
    if (!j.is_array()) throw IoFailure("contour JSON must be an array: " + path);
    Contour c;
    c.id = stem_of(path);
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2) throw IoFailure("bad [x,y] pair in " + path);
        c.points.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    if (c.size() < 3) throw TooFewPoints("contour has fewer than 3 points: " + path);
    normalize_orientation(c);
    return c;
}

void save_contour_json(const Contour& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << "[";
    for (size_t i = 0; i < c.size(); i++) {
        if (i) out << ",";
        out << "[" << format9(c.points[i].x) << "," << format9(c.points[i].y) << "]";
    }
    out << "]\n";
    if (!out) throw IoFailure("write failed: " + path);
}

Contour load_contour(const std::string& path) {
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".json") return load_contour_json(path);
    return load_contour_csv(path);
}

Document load_document(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoFailure("cannot open " + manifest_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoFailure("bad JSON in " + manifest_path + ": " + e.what());
    }

    Document doc;
    doc.id = j.value("id", stem_of(manifest_path));
    const fs::path base = fs::path(manifest_path).parent_path();
    if (!j.contains("symbols") || !j["symbols"].is_object())
        throw IoFailure("manifest missing symbols object: " + manifest_path);

    for (const auto& [label, files] : j["symbols"].items()) {
        if (!files.is_array()) throw IoFailure("symbol entry must be an array: " + label);
        int index = 0;
        for (const auto& f : files) {
            fs::path p = f.get<std::string>();
            if (p.is_relative()) p = base / p;
            Contour c = load_contour(p.string());
            c.id = doc.id + "/" + label + "/" + std::to_string(index++);
            doc.instances[label].push_back(std::move(c));
        }
        if (doc.instances[label].empty())
            throw IoFailure("symbol with no instances: " + label);
    }
    return doc;
}

std::vector<Document> load_corpus(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoFailure("cannot open " + manifest_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoFailure("bad JSON in " + manifest_path + ": " + e.what());
    }
    if (!j.contains("documents") || !j["documents"].is_array())
        throw IoFailure("corpus manifest missing documents array");

    const fs::path base = fs::path(manifest_path).parent_path();
    std::vector<Document> docs;
    for (const auto& d : j["documents"]) {
        fs::path p = d.get<std::string>();
        if (p.is_relative()) p = base / p;
        docs.push_back(load_document(p.string()));
    }
    return docs;
}

}  // namespace curveclass
