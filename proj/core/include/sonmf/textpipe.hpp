#pragma once

#include <set>
#include <string>
#include <vector>

#include "sonmf/matrix.hpp"

namespace sonmf {

struct Document {
  std::string text;
  std::string label;  // optional, empty when the corpus has none
};

enum class CorpusFormat {
  auto_detect,  // labeled iff every line has a space-free "label," prefix
  plain,        // one document per line
  labeled,      // two-column CSV: label,text
};

std::vector<Document> read_corpus(const std::string& path,
                                  CorpusFormat format = CorpusFormat::auto_detect);

const std::set<std::string>& default_stopwords();

// Lowercases, treats anything outside a-z as a separator (digits and
// punctuation vanish), drops stopwords, then Porter-stems what remains.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::set<std::string>& stopwords);

struct BagOfWords {
  std::vector<std::string> vocabulary;  // lexicographically sorted stems
  Matrix counts;                        // terms x documents, raw counts
  std::vector<int> doc_freq;            // documents containing each term
  std::vector<std::string> labels;      // per document, possibly empty
};

// Builds vocabulary and counts over the whole corpus, discarding terms that
// appear in fewer than min_doc_freq documents.  Throws ValidationError on an
// empty corpus or when filtering empties the vocabulary.
BagOfWords build_bag_of_words(const std::vector<Document>& docs,
                              int min_doc_freq,
                              const std::set<std::string>& stopwords);

enum class Weighting { tfidf, binary };

Weighting weighting_from_string(const std::string& name);
std::string to_string(Weighting w);

// tfidf: count * ln(n_docs / df)  (terms present everywhere weigh 0);
// binary: presence indicator.  idf is taken from the bag itself.
Matrix weight_matrix(const BagOfWords& bow, Weighting scheme);

// Counts unseen-vocabulary terms for docs vectorized against an existing
// bag (test-set handling); dropped terms are tallied, not errors.
struct VectorizeStats {
  Matrix counts;  // train vocabulary x docs
  long dropped_tokens = 0;
};
VectorizeStats vectorize_against(const BagOfWords& train,
                                 const std::vector<Document>& docs,
                                 const std::set<std::string>& stopwords);

// Weights test counts with the training bag's document frequencies so train
// and test share one feature space.
Matrix weight_against(const BagOfWords& train, const Matrix& counts,
                      Weighting scheme);

// Low-dimensional document features under a fitted basis: X^T F.
Matrix project_features(const Matrix& x, const Matrix& f);

struct TopicTerm {
  std::string term;
  double weight = 0.0;
};

struct TopicSummary {
  std::vector<TopicTerm> positive;  // largest weights first
  std::vector<TopicTerm> negative;  // most negative first
  bool truncated = false;  // fewer than m strictly signed terms existed
};

// Top-m positive and top-m negative vocabulary terms per column of F.
// Ties break lexicographically so summaries are deterministic.
std::vector<TopicSummary> topic_summary(const Matrix& f,
                                        const std::vector<std::string>& vocab,
                                        int m);

std::string topics_text(const std::vector<TopicSummary>& topics);

}  // namespace sonmf
