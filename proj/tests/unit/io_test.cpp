// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstring>
#include <set>

#include "embdim/io.hpp"
#include "helpers.hpp"
#include "npy_ref_data.hpp"

using namespace embdim;
using testutil::TempDir;

TEST_CASE("word2vec: minimal well-formed file") {
    TempDir dir;
    auto path = dir.write("v.txt", "2 3\na 1 0 0\nb 0 1 0\n");
    auto m = load_word2vec_text(path);
    CHECK(m.rows == 2);
    CHECK(m.dim == 3);
    REQUIRE(m.labels.size() == 2);
    CHECK(m.labels[0] == "a");
    CHECK(m.labels[1] == "b");
    CHECK(m(0, 0) == 1.0);
    CHECK(m(1, 1) == 1.0);
    CHECK(m(1, 2) == 0.0);
}

TEST_CASE("word2vec: wrong field count names the line") {
    TempDir dir;
    auto path = dir.write("v.txt", "1 2\nx 1.0 2.0 3.0\n");
    CHECK_THROWS_WITH_AS(load_word2vec_text(path),
                         doctest::Contains("line 2: row field count 3 != declared d=2"), ParseError);
}

TEST_CASE("word2vec: non-finite value names the row") {
    TempDir dir;
    auto path = dir.write("v.txt", "2 2\na 1 0\nb nan 1\n");
    CHECK_THROWS_WITH_AS(load_word2vec_text(path), doctest::Contains("non-finite value at row 2"),
                         ParseError);
    auto inf = dir.write("v2.txt", "1 2\na inf 0\n");
    CHECK_THROWS_AS(load_word2vec_text(inf), ParseError);
}

TEST_CASE("word2vec: header errors") {
    TempDir dir;
    CHECK_THROWS_AS(load_word2vec_text(dir.write("a.txt", "x y\n")), ParseError);
    CHECK_THROWS_AS(load_word2vec_text(dir.write("b.txt", "2\n")), ParseError);
    CHECK_THROWS_AS(load_word2vec_text(dir.write("c.txt", "0 3\n")), ParseError);
    CHECK_THROWS_AS(load_word2vec_text(dir.write("d.txt", "2 0\n")), ParseError);
    CHECK_THROWS_AS(load_word2vec_text(dir.write("e.txt", "")), ParseError);
}

TEST_CASE("word2vec: row count must match the header") {
    TempDir dir;
    CHECK_THROWS_AS(load_word2vec_text(dir.write("few.txt", "3 2\na 1 2\nb 3 4\n")), ParseError);
    CHECK_THROWS_AS(load_word2vec_text(dir.write("many.txt", "1 2\na 1 2\nb 3 4\n")), ParseError);
}

TEST_CASE("glove: minimal file and d inference") {
    TempDir dir;
    auto m = load_glove_text(dir.write("g.txt", "a 1 2\nb 3 4\n"));
    CHECK(m.rows == 2);
    CHECK(m.dim == 2);
    CHECK(m.labels[0] == "a");
    CHECK(m(1, 0) == 3.0);
}

TEST_CASE("glove: inconsistent field count names the line") {
    TempDir dir;
    auto path = dir.write("g.txt", "a 1 2\nb 3\n");
    CHECK_THROWS_WITH_AS(load_glove_text(path), doctest::Contains("line 2: has d=1, expected 2"),
                         ParseError);
}

TEST_CASE("glove: empty file") {
    TempDir dir;
    CHECK_THROWS_WITH_AS(load_glove_text(dir.write("g.txt", "")), doctest::Contains("no rows"),
                         ParseError);
}

TEST_CASE("csv: labeled and unlabeled variants") {
    TempDir dir;
    auto labeled = load_csv(dir.write("a.csv", "a,1,2\nb,3,4\n"));
    CHECK(labeled.rows == 2);
    CHECK(labeled.dim == 2);
    CHECK(labeled.labels == std::vector<std::string>{"a", "b"});

    auto plain = load_csv(dir.write("b.csv", "1,2\n3,4\n"));
    CHECK(plain.rows == 2);
    CHECK(plain.dim == 2);
    CHECK_FALSE(plain.has_labels());
    CHECK(plain(0, 1) == 2.0);
}

TEST_CASE("csv: ragged row is an error") {
    TempDir dir;
    CHECK_THROWS_WITH_AS(load_csv(dir.write("a.csv", "a,1\nb,1,2\n")),
                         doctest::Contains("ragged row 2"), ParseError);
}

TEST_CASE("word2vec and csv agree on equivalent content") {
    TempDir dir;
    auto w = load_word2vec_text(dir.write("w.txt", "2 3\nfoo 0.25 -1.5 3e-2\nbar 1 2 3\n"));
    auto c = load_csv(dir.write("c.csv", "foo,0.25,-1.5,3e-2\nbar,1,2,3\n"));
    CHECK(w.data == c.data);
    CHECK(w.labels == c.labels);
    CHECK(w.rows == c.rows);
    CHECK(w.dim == c.dim);
}

TEST_CASE("npy: reads numpy-written float64 file") {
    TempDir dir;
    auto path = dir.write_bytes("ref.npy", kNpyF8Ref, sizeof kNpyF8Ref);
    auto m = load_npy(path);
    CHECK(m.rows == 2);
    CHECK(m.dim == 2);
    CHECK(m.data == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK_FALSE(m.has_labels());
}

TEST_CASE("npy: reads numpy-written float32 file, widening to f8") {
    TempDir dir;
    auto path = dir.write_bytes("ref32.npy", kNpyF32Ref, sizeof kNpyF32Ref);
    auto m = load_npy(path);
    CHECK(m.rows == 3);
    CHECK(m.dim == 4);
    for (int i = 0; i < 12; ++i)
        CHECK(m.data[static_cast<std::size_t>(i)] ==
              static_cast<double>(static_cast<float>(i) / 7.0f));
}

TEST_CASE("npy: loader/writer round-trip is byte-identical") {
    TempDir dir;
    auto ref = dir.write_bytes("ref.npy", kNpyF8Ref, sizeof kNpyF8Ref);
    auto copy = dir.file("copy.npy");
    write_npy(copy, load_npy(ref));
    CHECK(testutil::slurp(copy) == testutil::slurp(ref));

    auto m = testutil::random_matrix(17, 9, 77);
    auto ours = dir.file("ours.npy");
    write_npy(ours, m);
    auto back = load_npy(ours);
    CHECK(back.data == m.data);
    auto again = dir.file("again.npy");
    write_npy(again, back);
    CHECK(testutil::slurp(again) == testutil::slurp(ours));
}

namespace {

// assembles an npy file with full control over every header field
std::string make_npy(const std::string& descr, const std::string& order, const std::string& shape,
                     const std::string& payload, char major = 1, char minor = 0,
                     const char* magic = "\x93NUMPY") {
    std::string dict = "{'descr': " + descr + ", 'fortran_order': " + order + ", 'shape': " + shape + ", }";
    const std::size_t unpadded = 10 + dict.size() + 1;
    dict.append((64 - unpadded % 64) % 64, ' ');
    dict.push_back('\n');
    std::string out(magic, 6);
    out.push_back(major);
    out.push_back(minor);
    out.push_back(static_cast<char>(dict.size() & 0xFF));
    out.push_back(static_cast<char>((dict.size() >> 8) & 0xFF));
    out += dict;
    out += payload;
    return out;
}

std::string f8_payload(std::size_t count) {
    std::string p(count * 8, '\0');
    for (std::size_t i = 0; i < count; ++i) {
        const double v = static_cast<double>(i) + 1.0;
        std::memcpy(p.data() + i * 8, &v, 8);
    }
    return p;
}

}  // namespace

TEST_CASE("npy: malformed files are rejected") {
    TempDir dir;

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("fortran.npy", make_npy("'<f8'", "True", "(2, 2)", f8_payload(4)))),
        doctest::Contains("fortran_order"), ParseError);

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("onedim.npy", make_npy("'<f8'", "False", "(4,)", f8_payload(4)))),
        doctest::Contains("expected 2-D"), ParseError);

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("threedim.npy", make_npy("'<f8'", "False", "(2, 2, 1)", f8_payload(4)))),
        doctest::Contains("expected 2-D"), ParseError);

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("dtype.npy", make_npy("'<i8'", "False", "(2, 2)", f8_payload(4)))),
        doctest::Contains("unsupported dtype"), ParseError);

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("bigend.npy", make_npy("'>f8'", "False", "(2, 2)", f8_payload(4)))),
        doctest::Contains("unsupported dtype"), ParseError);

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("magic.npy", make_npy("'<f8'", "False", "(2, 2)", f8_payload(4), 1, 0,
                                                 "\x93NUMPX"))),
        doctest::Contains("bad npy magic"), ParseError);

    CHECK_THROWS_WITH_AS(
        load_npy(dir.write("version.npy", make_npy("'<f8'", "False", "(2, 2)", f8_payload(4), 2, 0))),
        doctest::Contains("unsupported npy version"), ParseError);

    auto truncated = make_npy("'<f8'", "False", "(2, 2)", f8_payload(3));
    CHECK_THROWS_WITH_AS(load_npy(dir.write("short.npy", truncated)),
                         doctest::Contains("expected 32 bytes, got 24"), ParseError);

    auto trailing = make_npy("'<f8'", "False", "(2, 2)", f8_payload(5));
    CHECK_THROWS_AS(load_npy(dir.write("long.npy", trailing)), ParseError);

    CHECK_THROWS_AS(
        load_npy(dir.write("zero.npy", make_npy("'<f8'", "False", "(0, 2)", ""))), ParseError);
}

TEST_CASE("format detection: order and ambiguity") {
    TempDir dir;
    CHECK(detect_format(dir.write_bytes("x.npy", kNpyF8Ref, sizeof kNpyF8Ref)) == FileFormat::npy);
    CHECK(detect_format(dir.write("w.txt", "2 3\na 1 0 0\nb 0 1 0\n")) == FileFormat::word2vec);
    CHECK(detect_format(dir.write("g.txt", "a 1 2\nb 3 4\n")) == FileFormat::glove);
    CHECK(detect_format(dir.write("c.csv", "1,2\n3,4\n")) == FileFormat::csv);
    CHECK(detect_format(dir.write("cl.csv", "a,1,2\n")) == FileFormat::csv);
    // whitespace-separated all-numeric content matches nothing unambiguously
    CHECK_THROWS_AS(detect_format(dir.write("amb.txt", "1 2 3\n4 5 6\n")), ParseError);
    CHECK_THROWS_AS(detect_format(dir.write("empty.txt", "")), ParseError);
    CHECK_THROWS_AS(detect_format(dir.file("missing.txt")), ParseError);
}

TEST_CASE("load_matrix dispatches and validates") {
    TempDir dir;
    auto m = load_matrix(dir.write("g.txt", "a 1 2\nb 3 4\n"));
    CHECK(m.dim == 2);
    CHECK(m.source.find("[glove]") != std::string::npos);
}

TEST_CASE("sample_rows: identity, determinism, order") {
    auto m = testutil::random_matrix(10, 3, 5);
    m.labels.clear();
    for (std::size_t i = 0; i < m.rows; ++i) m.labels.push_back("r" + std::to_string(i));

    SUBCASE("count = n returns the identical matrix") {
        auto s = sample_rows(m, 10, 7);
        CHECK(s.data == m.data);
        CHECK(s.labels == m.labels);
    }
    SUBCASE("same seed, same sample") {
        auto a = sample_rows(m, 3, 7);
        auto b = sample_rows(m, 3, 7);
        CHECK(a.data == b.data);
        CHECK(a.labels == b.labels);
    }
    SUBCASE("selected rows keep original order and label pairing") {
        auto s = sample_rows(m, 4, 9);
        REQUIRE(s.rows == 4);
        std::size_t prev = 0;
        bool first = true;
        for (std::size_t i = 0; i < s.rows; ++i) {
            // recover the original index from the label
            const std::size_t orig = std::stoul(s.labels[i].substr(1));
            CHECK(std::equal(s.row(i), s.row(i) + s.dim, m.row(orig)));
            if (!first) CHECK(orig > prev);
            prev = orig;
            first = false;
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(sample_rows(m, 0, 1), PreconditionError);
        CHECK_THROWS_AS(sample_rows(m, 11, 1), PreconditionError);
    }
}

TEST_CASE("sample_rows: distinct seeds give distinct samples") {
    auto m = testutil::random_matrix(1000, 1, 11);
    std::set<std::vector<double>> seen;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        seen.insert(sample_rows(m, 100, seed).data);
    CHECK(seen.size() == 10);
}
