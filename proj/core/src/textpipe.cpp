#include "sonmf/textpipe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sonmf/stemmer.hpp"

namespace sonmf {

namespace {

bool looks_labeled(const std::vector<std::string>& lines) {
  if (lines.empty()) return false;
  for (const std::string& line : lines) {
    const size_t comma = line.find(',');
    if (comma == std::string::npos || comma == 0) return false;
    if (line.substr(0, comma).find_first_of(" \t") != std::string::npos)
      return false;
  }
  return true;
}

}  // namespace

std::vector<Document> read_corpus(const std::string& path,
                                  CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError("empty corpus: " + path);

  const bool labeled = format == CorpusFormat::labeled ||
                       (format == CorpusFormat::auto_detect &&
                        looks_labeled(lines));
  std::vector<Document> docs;
  docs.reserve(lines.size());
  for (const std::string& l : lines) {
    Document d;
    if (labeled) {
      const size_t comma = l.find(',');
      d.label = l.substr(0, comma);
      d.text = l.substr(comma + 1);
    } else {
      d.text = l;
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "cannot",
      "could", "did", "do", "does", "doing", "down", "during", "each", "few",
      "for", "from", "further", "had", "has", "have", "having", "he", "her",
      "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
      "in", "into", "is", "it", "its", "itself", "me", "more", "most", "my",
      "myself", "no", "nor", "not", "of", "off", "on", "once", "only", "or",
      "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
      "same", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "we", "were", "what", "when", "where", "which", "while",
      "who", "whom", "why", "with", "would", "you", "your", "yours",
      "yourself", "yourselves"};
  return words;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&]() {
    if (!current.empty() && !stopwords.contains(current))
      tokens.push_back(porter_stem(current));
    current.clear();
  };
  for (char c : text) {
    if (c >= 'a' && c <= 'z')
      current.push_back(c);
    else if (c >= 'A' && c <= 'Z')
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    else
      flush();
  }
  flush();
  return tokens;
}

BagOfWords build_bag_of_words(const std::vector<Document>& docs,
                              int min_doc_freq,
                              const std::set<std::string>& stopwords) {
  if (docs.empty()) throw ValidationError("build_bag_of_words: empty corpus");
  require(min_doc_freq >= 1, "build_bag_of_words: min_doc_freq must be >= 1");

  std::vector<std::map<std::string, double>> doc_counts(docs.size());
  std::map<std::string, int> df;
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& tok : tokenize(docs[d].text, stopwords))
      doc_counts[d][tok] += 1.0;
    for (const auto& [term, count] : doc_counts[d]) ++df[term];
  }

  BagOfWords bow;
  for (const auto& [term, freq] : df)
    if (freq >= min_doc_freq) {
      bow.vocabulary.push_back(term);  // std::map iterates lexicographically
      bow.doc_freq.push_back(freq);
    }
  if (bow.vocabulary.empty())
    throw ValidationError(
        "build_bag_of_words: vocabulary is empty after filtering");

  bow.counts = Matrix::Zero(static_cast<Index>(bow.vocabulary.size()),
                            static_cast<Index>(docs.size()));
  for (size_t d = 0; d < docs.size(); ++d)
    for (size_t t = 0; t < bow.vocabulary.size(); ++t) {
      const auto it = doc_counts[d].find(bow.vocabulary[t]);
      if (it != doc_counts[d].end())
        bow.counts(static_cast<Index>(t), static_cast<Index>(d)) = it->second;
    }
  for (const Document& d : docs) bow.labels.push_back(d.label);
  return bow;
}

Weighting weighting_from_string(const std::string& name) {
  if (name == "tfidf") return Weighting::tfidf;
  if (name == "binary") return Weighting::binary;
  throw DimensionError("unknown weighting: " + name);
}

std::string to_string(Weighting w) {
  return w == Weighting::tfidf ? "tfidf" : "binary";
}

namespace {

Matrix weight_counts(const Matrix& counts, const std::vector<int>& doc_freq,
                     double n_docs, Weighting scheme) {
  Matrix x = Matrix::Zero(counts.rows(), counts.cols());
  for (Index t = 0; t < counts.rows(); ++t) {
    const double idf =
        std::log(n_docs / static_cast<double>(doc_freq[static_cast<size_t>(t)]));
    for (Index d = 0; d < counts.cols(); ++d) {
      const double c = counts(t, d);
      if (c <= 0.0) continue;
      x(t, d) = scheme == Weighting::binary ? 1.0 : c * idf;
    }
  }
  return x;
}

}  // namespace

Matrix weight_matrix(const BagOfWords& bow, Weighting scheme) {
  return weight_counts(bow.counts, bow.doc_freq,
                       static_cast<double>(bow.counts.cols()), scheme);
}

VectorizeStats vectorize_against(const BagOfWords& train,
                                 const std::vector<Document>& docs,
                                 const std::set<std::string>& stopwords) {
  std::map<std::string, Index> index;
  for (size_t t = 0; t < train.vocabulary.size(); ++t)
    index[train.vocabulary[t]] = static_cast<Index>(t);

  VectorizeStats out;
  out.counts = Matrix::Zero(static_cast<Index>(train.vocabulary.size()),
                            static_cast<Index>(docs.size()));
  for (size_t d = 0; d < docs.size(); ++d)
    for (const std::string& tok : tokenize(docs[d].text, stopwords)) {
      const auto it = index.find(tok);
      if (it == index.end())
        ++out.dropped_tokens;
      else
        out.counts(it->second, static_cast<Index>(d)) += 1.0;
    }
  return out;
}

Matrix weight_against(const BagOfWords& train, const Matrix& counts,
                      Weighting scheme) {
  require(counts.rows() == train.counts.rows(),
          "weight_against: vocabulary sizes differ");
  return weight_counts(counts, train.doc_freq,
                       static_cast<double>(train.counts.cols()), scheme);
}

Matrix project_features(const Matrix& x, const Matrix& f) {
  require(x.rows() == f.rows(), "project_features: row counts differ");
  return x.transpose() * f;
}

std::vector<TopicSummary> topic_summary(const Matrix& f,
                                        const std::vector<std::string>& vocab,
                                        int m) {
  require(f.rows() == static_cast<Index>(vocab.size()),
          "topic_summary: vocabulary size does not match F rows");
  require(m >= 1, "topic_summary: need m >= 1");

  std::vector<TopicSummary> topics;
  for (Index c = 0; c < f.cols(); ++c) {
    std::vector<TopicTerm> terms;
    for (Index t = 0; t < f.rows(); ++t)
      terms.push_back({vocab[static_cast<size_t>(t)], f(t, c)});

    TopicSummary topic;
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.term < b.term;
    });
    for (const TopicTerm& t : terms) {
      if (t.weight <= 0.0 || static_cast<int>(topic.positive.size()) >= m)
        break;
      topic.positive.push_back(t);
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      if (a.weight != b.weight) return a.weight < b.weight;
      return a.term < b.term;
    });
    for (const TopicTerm& t : terms) {
      if (t.weight >= 0.0 || static_cast<int>(topic.negative.size()) >= m)
        break;
      topic.negative.push_back(t);
    }
    topic.truncated = static_cast<int>(topic.positive.size()) < m ||
                      static_cast<int>(topic.negative.size()) < m;
    topics.push_back(std::move(topic));
  }
  return topics;
}

std::string topics_text(const std::vector<TopicSummary>& topics) {
  std::ostringstream os;
  os.precision(6);
  os << "# topic\tside\tterm\tweight\n";
  for (size_t c = 0; c < topics.size(); ++c) {
    for (const TopicTerm& t : topics[c].positive)
      os << (c + 1) << "\t+\t" << t.term << '\t' << t.weight << '\n';
    for (const TopicTerm& t : topics[c].negative)
      os << (c + 1) << "\t-\t" << t.term << '\t' << t.weight << '\n';
    if (topics[c].truncated)
      os << (c + 1) << "\t!\tshort\t0\n";
  }
  return os.str();
}

}  // namespace sonmf
