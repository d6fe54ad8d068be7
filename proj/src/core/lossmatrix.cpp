#include "lossmatrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <fstream>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "fmt.hpp"

namespace atr {

LossMatrix::LossMatrix(std::vector<std::string> audio_ids,
                       std::vector<std::string> caption_ids,
                       std::vector<double> values, std::string meta)
    : audio_ids_(std::move(audio_ids)),
      caption_ids_(std::move(caption_ids)),
      values_(std::move(values)),
      meta_(std::move(meta)) {
  if (audio_ids_.empty() || caption_ids_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "InvalidShape: empty matrix");
  }
  if (values_.size() != audio_ids_.size() * caption_ids_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "DimensionMismatch: " + std::to_string(values_.size()) +
                    " values for " + std::to_string(audio_ids_.size()) + "x" +
                    std::to_string(caption_ids_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::Data, "matrix entries must be finite and >= 0");
    }
  }
  for (std::size_t i = 0; i < audio_ids_.size(); ++i) {
    if (!row_index_.emplace(audio_ids_[i], i).second) {
      throw Error(ErrorCode::Data, "duplicate audio_id " + audio_ids_[i]);
    }
  }
  for (std::size_t j = 0; j < caption_ids_.size(); ++j) {
    if (!col_index_.emplace(caption_ids_[j], j).second) {
      throw Error(ErrorCode::Data, "duplicate caption_id " + caption_ids_[j]);
    }
  }
}

std::size_t LossMatrix::row_of(const std::string& audio_id) const {
  auto it = row_index_.find(audio_id);
  if (it == row_index_.end()) {
    throw Error(ErrorCode::NotFound, "UnknownId: audio " + audio_id);
  }
  return it->second;
}

std::size_t LossMatrix::col_of(const std::string& caption_id) const {
  auto it = col_index_.find(caption_id);
  if (it == col_index_.end()) {
    throw Error(ErrorCode::NotFound, "UnknownId: caption " + caption_id);
  }
  return it->second;
}

bool LossMatrix::has_row(const std::string& audio_id) const {
  return row_index_.count(audio_id) > 0;
}

bool LossMatrix::has_col(const std::string& caption_id) const {
  return col_index_.count(caption_id) > 0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, path + ":" + std::to_string(line_no) +
                                      ": bad value \"" + cell + "\"");
  }
  return v;
}

}  // namespace

LossMatrix LossMatrix::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open matrix file: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::Parse, path + ": empty file");
  }
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "audio_id") {
    throw Error(ErrorCode::Parse,
                path + ":1: header must start with \"audio_id\"");
  }
  std::vector<std::string> caption_ids(header.begin() + 1, header.end());

  std::vector<std::string> audio_ids;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != caption_ids.size() + 1) {
      throw Error(ErrorCode::Parse,
                  path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(caption_ids.size() + 1) + " cells, got " +
                      std::to_string(cells.size()));
    }
    audio_ids.push_back(cells[0]);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      values.push_back(parse_cell(cells[j], path, line_no));
    }
  }
  return LossMatrix(std::move(audio_ids), std::move(caption_ids),
                    std::move(values));
}

void LossMatrix::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write matrix file: " + path);
  out << "audio_id";
  for (const std::string& id : caption_ids_) out << "," << id;
  out << "\n";
  for (std::size_t i = 0; i < rows(); ++i) {
    out << audio_ids_[i];
    for (std::size_t j = 0; j < cols(); ++j) {
      out << "," << format_double(at(i, j));
    }
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

LossMatrix build_loss_matrix(const Corpus& corpus, const Scorer& scorer,
                             unsigned threads) {
  const std::size_t n = corpus.num_items();
  const std::size_t m = corpus.num_captions();
  if (n == 0 || m == 0) {
    throw Error(ErrorCode::InvalidArgument, "empty corpus");
  }

  std::vector<double> values(n * m);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto score_rows = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        const CorpusItem& item = corpus.items()[i];
        for (const CaptionRef& cap : corpus.caption_index()) {
          double v = scorer.score(item.tags, cap.tokens);
          if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::Data,
                        "ScorerFailure at (" + item.audio_id + ", " +
                            std::to_string(cap.caption_id) +
                            "): score must be finite and >= 0");
          }
          values[i * m + cap.caption_id] = v;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (threads <= 1 || n < 2) {
    score_rows(0, n);
  } else {
    unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> workers;
    std::size_t chunk = (n + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(score_rows, begin, end);
    }
    for (std::thread& t : workers) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> audio_ids;
  for (const CorpusItem& item : corpus.items()) audio_ids.push_back(item.audio_id);
  std::vector<std::string> caption_ids;
  for (const CaptionRef& cap : corpus.caption_index()) {
    caption_ids.push_back(std::to_string(cap.caption_id));
  }
  return LossMatrix(std::move(audio_ids), std::move(caption_ids),
                    std::move(values));
}

}  // namespace atr
