// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "embdim/types.hpp"

namespace embdim {

enum class FileFormat { word2vec, glove, npy, csv, auto_detect };

FileFormat format_from_name(const std::string& name);
std::string format_name(FileFormat f);

/// word2vec text: header line "n d", then one "token v1 .. vd" line per row.
EmbeddingMatrix load_word2vec_text(const std::string& path);

/// GloVe text: no header; every line "token v1 .. vd", d inferred from line 1.
EmbeddingMatrix load_glove_text(const std::string& path);

/// CSV of floats; a leading non-numeric column (detected on line 1) is labels.
EmbeddingMatrix load_csv(const std::string& path);

/// npy v1.0, little-endian f4/f8, C order, 2-D only. Values widen to f8.
EmbeddingMatrix load_npy(const std::string& path);

/// Writes npy v1.0 "<f8" C-order, header padded as numpy emits it.
void write_npy(const std::string& path, const EmbeddingMatrix& m);

/// Sniffs the on-disk format: npy magic, then a two-integer word2vec header,
/// then comma (csv) vs whitespace-with-leading-token (glove).
/// Throws ParseError when the content matches none of them unambiguously.
FileFormat detect_format(const std::string& path);

EmbeddingMatrix load_matrix(const std::string& path, FileFormat f = FileFormat::auto_detect);

/// Uniform sample of `count` rows without replacement, original order kept.
/// Deterministic per seed.
EmbeddingMatrix sample_rows(const EmbeddingMatrix& m, std::size_t count, std::uint64_t seed);

}  // namespace embdim
