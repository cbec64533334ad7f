// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "embdim/types.hpp"

namespace testutil {

/// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 100; ++attempt) {
            auto candidate = base / ("embdim_test_" + std::to_string(std::random_device{}()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        const std::string p = file(name);
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }

    std::string write_bytes(const std::string& name, const unsigned char* bytes, std::size_t n) const {
        const std::string p = file(name);
        std::ofstream out(p, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(n));
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Independent k-NN oracle: per-pair subtraction distances and a full sort,
/// ties by (distance, index). O(n^2 log n); test-only.
struct OracleNeighbors {
    std::vector<std::vector<std::uint32_t>> indices;
    std::vector<std::vector<double>> distances;
};

inline OracleNeighbors naive_knn(const embdim::EmbeddingMatrix& m, std::size_t k) {
    OracleNeighbors o;
    o.indices.resize(m.rows);
    o.distances.resize(m.rows);
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::size_t i = 0; i < m.rows; ++i) {
        all.clear();
        for (std::size_t j = 0; j < m.rows; ++j) {
            if (j == i) continue;
            double acc = 0.0;
            for (std::size_t c = 0; c < m.dim; ++c) {
                const double diff = m(i, c) - m(j, c);
                acc += diff * diff;
            }
            all.emplace_back(std::sqrt(acc), static_cast<std::uint32_t>(j));
        }
        std::sort(all.begin(), all.end());
        for (std::size_t r = 0; r < k; ++r) {
            o.indices[i].push_back(all[r].second);
            o.distances[i].push_back(all[r].first);
        }
    }
    return o;
}

/// All-pairs sorted distance list for one row (for tie-gap guards).
inline std::vector<double> sorted_row_distances(const embdim::EmbeddingMatrix& m, std::size_t i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < m.rows; ++j) {
        if (j == i) continue;
        double acc = 0.0;
        for (std::size_t c = 0; c < m.dim; ++c) {
            const double diff = m(i, c) - m(j, c);
            acc += diff * diff;
        }
        d.push_back(std::sqrt(acc));
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline embdim::EmbeddingMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed,
                                             double scale = 1.0) {
    embdim::EmbeddingMatrix m;
    m.rows = n;
    m.dim = d;
    m.data.resize(n * d);
    m.source = "test";
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : m.data) v = u(eng) * scale;
    return m;
}

/// Checks a document against the subset of JSON Schema the shipped schema
/// uses: type, required, properties, minimum, maximum, exclusiveMinimum.
inline void validate_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                            std::string where = "$") {
    using nlohmann::json;
    if (schema.contains("type")) {
        const std::string type = schema["type"];
        bool ok = (type == "object" && doc.is_object()) || (type == "string" && doc.is_string()) ||
                  (type == "integer" && doc.is_number_integer()) ||
                  (type == "number" && doc.is_number());
        if (!ok)
            throw std::runtime_error(where + ": expected " + type + ", got " + std::string(doc.type_name()));
    }
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!doc.contains(key.get<std::string>()))
                throw std::runtime_error(where + ": missing required key " + key.get<std::string>());
    if (schema.contains("properties"))
        for (const auto& [key, sub] : schema["properties"].items())
            if (doc.contains(key)) validate_schema(doc.at(key), sub, where + "." + key);
    if (doc.is_number()) {
        const double v = doc.get<double>();
        if (schema.contains("minimum") && v < schema["minimum"].get<double>())
            throw std::runtime_error(where + ": below minimum");
        if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>())
            throw std::runtime_error(where + ": not above exclusiveMinimum");
        if (schema.contains("maximum") && v > schema["maximum"].get<double>())
            throw std::runtime_error(where + ": above maximum");
    }
}

}  // namespace testutil
