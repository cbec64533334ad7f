// SPDX-License-Identifier: Apache-2.0
#include "embdim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "embdim/rng.hpp"

namespace embdim {

namespace {

constexpr char kNpyMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_size(std::string_view s, std::size_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

std::vector<std::string_view> split_char(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

std::ifstream open_or_throw(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw ParseError(path + ": cannot open file");
    return in;
}

// Replaces invalid UTF-8 bytes so labels never poison downstream output.
std::string sanitize_label(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        unsigned char c = static_cast<unsigned char>(raw[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
        bool ok = len > 0 && i + len <= raw.size();
        for (std::size_t j = 1; ok && j < len; ++j)
            ok = (static_cast<unsigned char>(raw[i + j]) & 0xC0) == 0x80;
        if (ok) {
            out.append(raw.substr(i, len));
            i += len;
        } else {
            out.append("\xEF\xBF\xBD");  // U+FFFD
            ++i;
        }
    }
    return out;
}

void check_finite(double v, std::size_t data_row) {
    if (!std::isfinite(v))
        throw ParseError("non-finite value at row " + std::to_string(data_row));
}

}  // namespace

FileFormat format_from_name(const std::string& name) {
    if (name == "word2vec") return FileFormat::word2vec;
    if (name == "glove") return FileFormat::glove;
    if (name == "npy") return FileFormat::npy;
    if (name == "csv") return FileFormat::csv;
    if (name == "auto") return FileFormat::auto_detect;
    throw PreconditionError("unknown format '" + name + "' (expected word2vec|glove|npy|csv|auto)");
}

std::string format_name(FileFormat f) {
    switch (f) {
        case FileFormat::word2vec: return "word2vec";
        case FileFormat::glove: return "glove";
        case FileFormat::npy: return "npy";
        case FileFormat::csv: return "csv";
        case FileFormat::auto_detect: return "auto";
    }
    return "?";
}

EmbeddingMatrix load_word2vec_text(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path + ": line 1: empty file, expected 'n d' header");
    auto header = split_ws(strip_cr(line));
    std::size_t n = 0, d = 0;
    if (header.size() != 2 || !parse_size(header[0], n) || !parse_size(header[1], d))
        throw ParseError(path + ": line 1: malformed header, expected two integers 'n d'");
    if (n == 0 || d == 0)
        throw ParseError(path + ": line 1: declared n=" + std::to_string(n) + " d=" +
                         std::to_string(d) + ", both must be >= 1");

    EmbeddingMatrix m;
    m.rows = n;
    m.dim = d;
    m.data.reserve(n * d);
    m.labels.reserve(n);
    m.source = path + " [word2vec]";

    std::size_t lineno = 1;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(strip_cr(line));
        if (fields.empty()) continue;  // tolerate blank lines
        if (row == n)
            throw ParseError(path + ": line " + std::to_string(lineno) + ": extra row beyond declared n=" +
                             std::to_string(n));
        ++row;
        if (fields.size() != d + 1)
            throw ParseError(path + ": line " + std::to_string(lineno) + ": row field count " +
                             std::to_string(fields.size() - 1) + " != declared d=" + std::to_string(d));
        m.labels.push_back(sanitize_label(fields[0]));
        for (std::size_t j = 1; j <= d; ++j) {
            double v;
            if (!parse_double(fields[j], v))
                throw ParseError(path + ": line " + std::to_string(lineno) + ": cannot parse value '" +
                                 std::string(fields[j]) + "'");
            check_finite(v, row);
            m.data.push_back(v);
        }
    }
    if (row != n)
        throw ParseError(path + ": declared n=" + std::to_string(n) + " rows but file has " +
                         std::to_string(row));
    return m;
}

EmbeddingMatrix load_glove_text(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    EmbeddingMatrix m;
    m.source = path + " [glove]";

    std::string line;
    std::size_t lineno = 0;
    std::size_t d = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(strip_cr(line));
        if (fields.empty()) continue;
        if (m.rows == 0) {
            if (fields.size() < 2)
                throw ParseError(path + ": line " + std::to_string(lineno) +
                                 ": expected token followed by at least one value");
            d = fields.size() - 1;
        } else if (fields.size() != d + 1) {
            throw ParseError(path + ": line " + std::to_string(lineno) + ": has d=" +
                             std::to_string(fields.size() - 1) + ", expected " + std::to_string(d));
        }
        ++m.rows;
        m.labels.push_back(sanitize_label(fields[0]));
        for (std::size_t j = 1; j <= d; ++j) {
            double v;
            if (!parse_double(fields[j], v))
                throw ParseError(path + ": line " + std::to_string(lineno) + ": cannot parse value '" +
                                 std::string(fields[j]) + "'");
            check_finite(v, m.rows);
            m.data.push_back(v);
        }
    }
    if (m.rows == 0) throw ParseError(path + ": no rows");
    m.dim = d;
    return m;
}

EmbeddingMatrix load_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    EmbeddingMatrix m;
    m.source = path + " [csv]";

    std::string line;
    std::size_t row = 0;
    bool labeled = false;
    std::size_t d = 0;
    while (std::getline(in, line)) {
        auto sv = strip_cr(line);
        if (sv.empty()) continue;
        auto fields = split_char(sv, ',');
        ++row;
        if (row == 1) {
            double probe;
            labeled = !parse_double(fields[0], probe);
            if (labeled && fields.size() < 2)
                throw ParseError(path + ": row 1: label with no values");
            d = fields.size() - (labeled ? 1 : 0);
            if (d == 0) throw ParseError(path + ": row 1: no values");
        } else if (fields.size() != d + (labeled ? 1 : 0)) {
            throw ParseError(path + ": ragged row " + std::to_string(row) + ": " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(d + (labeled ? 1 : 0)));
        }
        std::size_t off = 0;
        if (labeled) {
            m.labels.push_back(sanitize_label(fields[0]));
            off = 1;
        }
        for (std::size_t j = off; j < fields.size(); ++j) {
            double v;
            if (!parse_double(fields[j], v))
                throw ParseError(path + ": row " + std::to_string(row) + ": cannot parse value '" +
                                 std::string(fields[j]) + "'");
            check_finite(v, row);
            m.data.push_back(v);
        }
    }
    if (row == 0) throw ParseError(path + ": no rows");
    m.rows = row;
    m.dim = d;
    return m;
}

namespace {

// Minimal parser for the header dict {'descr': '<f8', 'fortran_order': False, 'shape': (n, d), }
std::string dict_value(const std::string& dict, const std::string& key, const std::string& path) {
    const std::string quoted = "'" + key + "'";
    std::size_t pos = dict.find(quoted);
    if (pos == std::string::npos) throw ParseError(path + ": npy header missing key " + quoted);
    pos = dict.find(':', pos + quoted.size());
    if (pos == std::string::npos) throw ParseError(path + ": npy header malformed near " + quoted);
    ++pos;
    while (pos < dict.size() && dict[pos] == ' ') ++pos;
    std::size_t end;
    if (pos < dict.size() && dict[pos] == '(') {
        end = dict.find(')', pos);
        if (end == std::string::npos) throw ParseError(path + ": npy header has unterminated tuple");
        ++end;
    } else {
        end = dict.find_first_of(",}", pos);
        if (end == std::string::npos) end = dict.size();
    }
    std::string v = dict.substr(pos, end - pos);
    while (!v.empty() && (v.back() == ' ' || v.back() == ',')) v.pop_back();
    return v;
}

}  // namespace

EmbeddingMatrix load_npy(const std::string& path) {
    std::ifstream in = open_or_throw(path, std::ios::in | std::ios::binary);

    char prelude[10];
    in.read(prelude, sizeof prelude);
    if (in.gcount() != sizeof prelude || std::memcmp(prelude, kNpyMagic, 6) != 0)
        throw ParseError(path + ": bad npy magic");
    const unsigned major = static_cast<unsigned char>(prelude[6]);
    const unsigned minor = static_cast<unsigned char>(prelude[7]);
    if (major != 1 || minor != 0)
        throw ParseError(path + ": unsupported npy version " + std::to_string(major) + "." +
                         std::to_string(minor) + " (only 1.0)");
    const std::size_t header_len = static_cast<unsigned char>(prelude[8]) |
                                   (static_cast<unsigned char>(prelude[9]) << 8);

    std::string header(header_len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(header_len));
    if (in.gcount() != static_cast<std::streamsize>(header_len))
        throw ParseError(path + ": truncated npy header");

    const std::string descr_raw = dict_value(header, "descr", path);
    std::string descr = descr_raw;
    if (descr.size() >= 2 && descr.front() == '\'' && descr.back() == '\'')
        descr = descr.substr(1, descr.size() - 2);
    std::size_t itemsize;
    if (descr == "<f4") itemsize = 4;
    else if (descr == "<f8") itemsize = 8;
    else throw ParseError(path + ": unsupported dtype " + descr_raw + " (only '<f4' and '<f8')");

    const std::string order = dict_value(header, "fortran_order", path);
    if (order == "True") throw ParseError(path + ": unsupported layout: fortran_order=True");
    if (order != "False") throw ParseError(path + ": npy header has invalid fortran_order " + order);

    std::string shape = dict_value(header, "shape", path);
    if (shape.size() < 2 || shape.front() != '(' || shape.back() != ')')
        throw ParseError(path + ": npy header has invalid shape " + shape);
    shape = shape.substr(1, shape.size() - 2);
    std::vector<std::size_t> dims;
    for (auto part : split_char(shape, ',')) {
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
        if (part.empty()) continue;  // trailing comma in 1-tuples
        std::size_t v;
        if (!parse_size(part, v))
            throw ParseError(path + ": npy header has invalid shape entry '" + std::string(part) + "'");
        dims.push_back(v);
    }
    if (dims.size() != 2)
        throw ParseError(path + ": expected 2-D shape, got " + std::to_string(dims.size()) + "-D");
    const std::size_t n = dims[0], d = dims[1];
    if (n == 0 || d == 0) throw ParseError(path + ": npy shape has a zero dimension");

    const std::size_t expect = n * d * itemsize;
    std::vector<char> payload(expect);
    in.read(payload.data(), static_cast<std::streamsize>(expect));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got != expect)
        throw ParseError(path + ": truncated payload: expected " + std::to_string(expect) +
                         " bytes, got " + std::to_string(got));
    char probe;
    if (in.read(&probe, 1))
        throw ParseError(path + ": trailing data after " + std::to_string(expect) + " payload bytes");

    EmbeddingMatrix m;
    m.rows = n;
    m.dim = d;
    m.data.resize(n * d);
    m.source = path + " [npy]";
    if (itemsize == 8) {
        std::memcpy(m.data.data(), payload.data(), expect);
    } else {
        const float* src = reinterpret_cast<const float*>(payload.data());
        for (std::size_t i = 0; i < n * d; ++i) m.data[i] = static_cast<double>(src[i]);
    }
    for (std::size_t i = 0; i < m.data.size(); ++i) check_finite(m.data[i], i / d + 1);
    return m;
}

void write_npy(const std::string& path, const EmbeddingMatrix& m) {
    std::ostringstream dict;
    dict << "{'descr': '<f8', 'fortran_order': False, 'shape': (" << m.rows << ", " << m.dim << "), }";
    std::string header = dict.str();
    // numpy pads the header block (magic+version+len+dict+'\n') to 64 bytes
    const std::size_t unpadded = 10 + header.size() + 1;
    header.append((64 - unpadded % 64) % 64, ' ');
    header.push_back('\n');

    std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out.write(kNpyMagic, 6);
    out.put('\x01');
    out.put('\x00');
    const std::size_t len = header.size();
    out.put(static_cast<char>(len & 0xFF));
    out.put(static_cast<char>((len >> 8) & 0xFF));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!out) throw ParseError(path + ": write failed");
}

FileFormat detect_format(const std::string& path) {
    {
        std::ifstream in = open_or_throw(path, std::ios::in | std::ios::binary);
        char magic[6] = {};
        in.read(magic, 6);
        if (in.gcount() == 6 && std::memcmp(magic, kNpyMagic, 6) == 0) return FileFormat::npy;
    }
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file, cannot detect format");
    auto sv = strip_cr(line);

    auto ws = split_ws(sv);
    std::size_t a, b;
    if (ws.size() == 2 && parse_size(ws[0], a) && parse_size(ws[1], b)) return FileFormat::word2vec;
    if (sv.find(',') != std::string_view::npos) return FileFormat::csv;
    if (ws.size() >= 2) {
        double v;
        bool token_first = !parse_double(ws[0], v);
        bool rest_numeric = true;
        for (std::size_t j = 1; j < ws.size(); ++j) rest_numeric = rest_numeric && parse_double(ws[j], v);
        if (token_first && rest_numeric) return FileFormat::glove;
    }
    throw ParseError(path + ": cannot detect format (not npy, word2vec, glove, or csv); pass --format");
}

EmbeddingMatrix load_matrix(const std::string& path, FileFormat f) {
    if (f == FileFormat::auto_detect) f = detect_format(path);
    EmbeddingMatrix m;
    switch (f) {
        case FileFormat::word2vec: m = load_word2vec_text(path); break;
        case FileFormat::glove: m = load_glove_text(path); break;
        case FileFormat::npy: m = load_npy(path); break;
        case FileFormat::csv: m = load_csv(path); break;
        case FileFormat::auto_detect: throw PreconditionError("unreachable");
    }
    m.validate();
    return m;
}

EmbeddingMatrix sample_rows(const EmbeddingMatrix& m, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw PreconditionError("sample count must be >= 1");
    if (count > m.rows)
        throw PreconditionError("sample count " + std::to_string(count) + " exceeds row count " +
                                std::to_string(m.rows));
    if (count == m.rows) return m;

    std::vector<std::size_t> idx(m.rows);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(m.rows - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());

    EmbeddingMatrix out;
    out.rows = count;
    out.dim = m.dim;
    out.data.reserve(count * m.dim);
    out.source = m.source + " sample=" + std::to_string(count) + "/" + std::to_string(m.rows) +
                 " seed=" + std::to_string(seed);
    if (m.has_labels()) out.labels.reserve(count);
    for (std::size_t i : idx) {
        const double* r = m.row(i);
        out.data.insert(out.data.end(), r, r + m.dim);
        if (m.has_labels()) out.labels.push_back(m.labels[i]);
    }
    return out;
}

}  // namespace embdim
