#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doclay/document.hpp"
#include "doclay/rng.hpp"

namespace doclay::synthetic {

// Fixture generators for tests, benchmarks and demo corpora. All outputs are
// a pure function of the generator state.

struct TableOptions {
  double min_gap = 10;       // every inter-row and inter-column gap exceeds this
  double tolerance = 50;     // per-cell center-x jitter stays well below this
  bool annotate = false;     // attach a TableAnnotation
};

struct SyntheticTable {
  DocumentPage page;
  // truth[r][c] = segment index; row 0 is the header row.
  std::vector<std::vector<std::size_t>> truth;
};

// Grid table with `body_rows` body rows under one header row, filling the
// normalized page.
SyntheticTable table(Rng& rng, std::size_t body_rows, std::size_t cols, const std::string& page_id,
                     const TableOptions& options = {});

// Raw OCR record in source units for a document page with a title, author
// line, paragraphs, an annotated table and a footer, plus layout labels.
nlohmann::json raw_document(Rng& rng, const std::string& page_id);

// Normalized page of `n_segments` short text lines in reading order.
DocumentPage text_page(Rng& rng, const std::string& page_id, std::size_t n_segments);

// Word drawn from a fixed vocabulary that mixes words, numbers and amounts.
std::string word(Rng& rng);

// Raw OCR JSONL corpus: mostly raw_document pages, with every fifth page an
// unannotated table page so both table structure paths are exercised.
std::vector<nlohmann::json> corpus(std::uint64_t seed, std::size_t pages, const std::string& prefix = "page");

}  // namespace doclay::synthetic
