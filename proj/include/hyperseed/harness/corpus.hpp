#pragma once
/**
 * Directory-per-language text corpora.
 *
 * Layout: <train_dir>/<language>/<files> and <test_dir>/<language>/<files>.
 * Every training file is preprocessed on its own and cut into consecutive
 * fixed-length chunks; a trailing partial chunk is dropped. Every non-blank
 * line of a test file is one sentence.
 *
 * The synthetic generator draws text from a character trigram model estimated
 * from "gram<TAB>count" tables.
 */

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hyperseed/encoders.hpp"
#include "hyperseed/error.hpp"
#include "hyperseed/rng.hpp"

namespace hyperseed::harness {

struct CorpusDataset {
  std::vector<std::string> languages;
  std::vector<std::vector<std::string>> train;  // per language: chunks of chunk_length symbols
  std::vector<std::vector<std::string>> test;   // per language: sentences
  std::size_t chunk_length = 1000;
  std::size_t skipped_sentences = 0;
  std::vector<std::string> warnings;
};

struct CorpusOptions {
  std::size_t chunk_length = 1000;
  /// Sentences shorter than this (after preprocessing) are skipped.
  std::size_t min_sentence = 3;
  /// Restrict to these languages; empty means every subdirectory of train_dir.
  std::vector<std::string> languages;
};

namespace detail {

inline std::vector<std::filesystem::path> regular_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Non-blank preprocessed lines of every file in `dir`; lines shorter than min_sentence are counted in `skipped`.
inline std::vector<std::string> read_sentences(const std::string& dir, std::size_t min_sentence, std::size_t& skipped) {
  if (!std::filesystem::is_directory(dir)) throw DataError(dir + ": missing language directory");
  const auto files = detail::regular_files(dir);
  if (files.empty()) throw DataError(dir + ": empty language directory");
  std::vector<std::string> sentences;
  for (const auto& file : files) {
    std::istringstream lines(detail::read_file(file));
    std::string line;
    while (std::getline(lines, line)) {
      std::string sentence = preprocess_text(line);
      if (sentence.empty()) continue;
      if (sentence.size() < min_sentence) {
        ++skipped;
        continue;
      }
      sentences.push_back(std::move(sentence));
    }
  }
  if (sentences.empty()) throw DataError(dir + ": no test sentences");
  return sentences;
}

/// Test sentences only: languages are `languages`, or every subdirectory of test_dir when empty.
inline CorpusDataset load_test_corpus(const std::string& test_dir, const CorpusOptions& options = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(test_dir)) throw DataError(test_dir + ": not a directory");
  CorpusDataset corpus;
  corpus.chunk_length = options.chunk_length;
  corpus.languages = options.languages;
  if (corpus.languages.empty()) {
    for (const auto& entry : fs::directory_iterator(test_dir)) {
      if (entry.is_directory()) corpus.languages.push_back(entry.path().filename().string());
    }
    std::sort(corpus.languages.begin(), corpus.languages.end());
  }
  if (corpus.languages.empty()) throw DataError(test_dir + ": no language directories");
  for (const auto& lang : corpus.languages) {
    corpus.train.emplace_back();
    corpus.test.push_back(
        read_sentences((fs::path(test_dir) / lang).string(), options.min_sentence, corpus.skipped_sentences));
  }
  return corpus;
}

inline CorpusDataset load_language_corpus(const std::string& train_dir, const std::string& test_dir,
                                          const CorpusOptions& options = {}) {
  namespace fs = std::filesystem;
  if (options.chunk_length == 0) throw InvalidArgument("load_language_corpus: chunk length must be positive");
  if (!fs::is_directory(train_dir)) throw DataError(train_dir + ": not a directory");
  if (!fs::is_directory(test_dir)) throw DataError(test_dir + ": not a directory");

  CorpusDataset corpus;
  corpus.chunk_length = options.chunk_length;
  if (options.languages.empty()) {
    for (const auto& entry : fs::directory_iterator(train_dir)) {
      if (entry.is_directory()) corpus.languages.push_back(entry.path().filename().string());
    }
    std::sort(corpus.languages.begin(), corpus.languages.end());
  } else {
    corpus.languages = options.languages;
  }
  if (corpus.languages.empty()) throw DataError(train_dir + ": no language directories");

  for (const auto& lang : corpus.languages) {
    const fs::path train_lang = fs::path(train_dir) / lang;
    const fs::path test_lang = fs::path(test_dir) / lang;
    if (!fs::is_directory(train_lang)) throw DataError(train_lang.string() + ": missing language directory");

    const auto train_files = detail::regular_files(train_lang);
    if (train_files.empty()) throw DataError(train_lang.string() + ": empty language directory");
    std::vector<std::string> chunks;
    for (const auto& file : train_files) {
      const std::string text = preprocess_text(detail::read_file(file));
      if (text.size() < options.chunk_length) {
        corpus.warnings.push_back(file.string() + ": shorter than " + std::to_string(options.chunk_length) +
                                  " symbols, no training chunks");
      }
      for (std::size_t start = 0; start + options.chunk_length <= text.size(); start += options.chunk_length) {
        chunks.push_back(text.substr(start, options.chunk_length));
      }
    }
    if (chunks.empty()) throw DataError(train_lang.string() + ": no training chunks");

    auto sentences = read_sentences(test_lang.string(), options.min_sentence, corpus.skipped_sentences);

    corpus.train.push_back(std::move(chunks));
    corpus.test.push_back(std::move(sentences));
  }
  return corpus;
}

/**
 * Character trigram model over the 27-symbol alphabet.
 *
 * The next symbol is drawn in proportion to count(c1 c2 x) for the last two
 * symbols c1 c2. Word starts are drawn from the grams that begin with a space.
 * A context without continuations ends the word; after a space it starts a new
 * one.
 */
class TrigramModel {
 public:
  /// Reads "gram<TAB>count" lines; grams outside the alphabet are ignored.
  static TrigramModel from_table(std::istream& in, const std::string& source = "trigram table") {
    TrigramModel model;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab != 3) throw DataError(source + ":" + std::to_string(line_no) + ": expected 'gram<TAB>count'");
      const std::string gram = line.substr(0, 3);
      double count = 0.0;
      try {
        count = std::stod(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw DataError(source + ":" + std::to_string(line_no) + ": bad count");
      }
      if (!(count > 0.0)) continue;
      if (!std::all_of(gram.begin(), gram.end(),
                       [](char c) { return kLatinAlphabet.find(c) != std::string_view::npos; })) {
        continue;
      }
      if (gram[1] == ' ') continue;  // a word boundary inside the gram carries no in-word context
      model.add(gram, count);
    }
    if (model.starts_.total == 0.0) throw DataError(source + ": no word-start grams");
    return model;
  }

  static TrigramModel from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    return from_table(in, path);
  }

  /// Exactly `length` symbols (length >= 2); no leading, trailing or doubled spaces.
  std::string generate(std::size_t length, Rng& rng) const {
    if (length < 2) throw InvalidArgument("TrigramModel::generate: length must be at least 2");
    std::string out;
    out.reserve(length + 2);
    start_word(out, rng);
    while (out.size() < length) {
      const std::string context = out.substr(out.size() - 2);
      const auto it = next_.find(context);
      if (context[1] == ' ') {
        start_word(out, rng);
      } else if (it == next_.end()) {
        out.push_back(' ');
      } else {
        out.push_back(it->second.draw(rng)[0]);
      }
    }
    out.resize(length);
    if (out.back() == ' ') out.back() = starts_.draw(rng)[0];
    return out;
  }

 private:
  struct Distribution {
    std::vector<std::string> outcomes;
    std::vector<double> cumulative;
    double total = 0.0;

    void add(std::string outcome, double weight) {
      total += weight;
      outcomes.push_back(std::move(outcome));
      cumulative.push_back(total);
    }

    const std::string& draw(Rng& rng) const {
      const double u = rng.uniform() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      return outcomes[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), outcomes.size() - 1)];
    }
  };

  void add(const std::string& gram, double count) {
    if (gram[0] == ' ') starts_.add(gram.substr(1), count);
    next_[gram.substr(0, 2)].add(gram.substr(2), count);
  }

  void start_word(std::string& out, Rng& rng) const {
    const std::string& start = starts_.draw(rng);
    out += start;
  }

  Distribution starts_;
  std::map<std::string, Distribution> next_;
};

/// Sentence lengths drawn uniformly from [min_length, max_length].
struct CorpusGenerationOptions {
  std::size_t train_chunks = 200;
  std::size_t chunk_length = 1000;
  std::size_t test_sentences = 100;
  std::size_t min_sentence_length = 60;
  std::size_t max_sentence_length = 240;
};

/**
 * Writes <out>/train/<lang>/text.txt (train_chunks * chunk_length symbols,
 * wrapped at word boundaries) and <out>/test/<lang>/sentences.txt for every
 * "<lang>.tsv" trigram table named in `languages`. Language l uses stream l
 * of `rng`.
 */
inline void generate_language_corpus(const std::string& stats_dir, const std::vector<std::string>& languages,
                                     const std::string& out_dir, const CorpusGenerationOptions& options,
                                     const Rng& rng) {
  namespace fs = std::filesystem;
  if (options.min_sentence_length == 0 || options.min_sentence_length > options.max_sentence_length) {
    throw InvalidArgument("generate_language_corpus: bad sentence length range");
  }
  for (std::size_t l = 0; l < languages.size(); ++l) {
    const auto model = TrigramModel::from_file((fs::path(stats_dir) / (languages[l] + ".tsv")).string());
    Rng lang_rng = rng.split(l);
    const fs::path train_lang = fs::path(out_dir) / "train" / languages[l];
    const fs::path test_lang = fs::path(out_dir) / "test" / languages[l];
    fs::create_directories(train_lang);
    fs::create_directories(test_lang);

    const std::string text = model.generate(options.train_chunks * options.chunk_length, lang_rng);
    std::ofstream train(train_lang / "text.txt");
    std::size_t column = 0;
    for (char c : text) {
      if (c == ' ' && column >= 72) {
        train << '\n';
        column = 0;
      } else {
        train << c;
        ++column;
      }
    }
    train << '\n';

    std::ofstream test(test_lang / "sentences.txt");
    const std::size_t span = options.max_sentence_length - options.min_sentence_length + 1;
    for (std::size_t s = 0; s < options.test_sentences; ++s) {
      const std::size_t len = options.min_sentence_length + static_cast<std::size_t>(lang_rng.below(span));
      test << model.generate(len, lang_rng) << '\n';
    }
    if (!train || !test) throw DataError(out_dir + ": write failure");
  }
}

}  // namespace hyperseed::harness
