#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bookmem/attribution.hpp"
#include "bookmem/profile.hpp"

namespace bookmem {

// Remote-service failure that survived the retry budget. Distinct from data
// errors: pipelines map this to the provider/network exit code.
struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RetryPolicy {
    size_t max_attempts = 3;
    size_t backoff_ms = 50; // doubled per attempt, plus seeded jitter
    uint64_t jitter_seed = 0;
};

// Embedding provider wire contract:
//   request  {"texts": ["...", ...]}
//   response {"vectors": [[...], ...]} in request order.
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

// Deterministic offline embedder: hashed bag-of-words projected to a fixed
// dimension. Pure function of the text bytes.
class MockEmbedder : public EmbeddingProvider {
  public:
    explicit MockEmbedder(size_t dim = 64) : dim_(dim) {}
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    EmbeddingVector embed_one(const std::string& text) const;

  private:
    size_t dim_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
  public:
    HttpEmbeddingProvider(std::string host, int port, RetryPolicy retry = {});
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

  private:
    std::string host_;
    int port_;
    RetryPolicy retry_;
};

// Text-generation provider wire contract:
//   request  {"prompt": "...", "max_words": N}
//   response {"text": "..."}
class TextProvider {
  public:
    virtual ~TextProvider() = default;
    virtual std::string complete(const std::string& prompt, size_t max_words) = 0;
};

// Deterministic extractive mock: returns a fixed prefix plus the first
// max_words words of the prompt's trailing payload (the text after the
// first blank line), lower-cased. Extractive on purpose so summaries share
// m-grams with their source.
class MockTextProvider : public TextProvider {
  public:
    std::string complete(const std::string& prompt, size_t max_words) override;
};

class HttpTextProvider : public TextProvider {
  public:
    HttpTextProvider(std::string host, int port, RetryPolicy retry = {});
    std::string complete(const std::string& prompt, size_t max_words) override;

  private:
    std::string host_;
    int port_;
    RetryPolicy retry_;
};

// Corpus-count service wire contract:
//   GET /count?mode={exact|soft}&q=<url-encoded text> -> {"count": N}
// Service failures surface as HTTP 5xx and are retried before erroring.
class CorpusClient {
  public:
    virtual ~CorpusClient() = default;
    virtual uint64_t count(MatchMode mode, const std::string& text) = 0;
};

// In-process corpus over a set of documents; substring occurrence counts.
// Soft mode searches the soft-normalized documents with the soft-normalized
// query.
class MockCorpus : public CorpusClient {
  public:
    void add_document(const std::string& text);
    // Loads every regular file in a directory as one document, sorted by name.
    void load_directory(const std::string& dir);
    uint64_t count(MatchMode mode, const std::string& text) override;
    // Makes the next n requests fail (for retry-path tests via the server).
    void fail_next(size_t n) { fail_budget_ = n; }
    bool take_failure();

  private:
    std::vector<std::string> exact_docs_;
    std::vector<std::string> soft_docs_;
    size_t fail_budget_ = 0;
};

class HttpCorpusClient : public CorpusClient {
  public:
    HttpCorpusClient(std::string host, int port, RetryPolicy retry = {});
    uint64_t count(MatchMode mode, const std::string& text) override;

  private:
    std::string host_;
    int port_;
    RetryPolicy retry_;
};

// Blocking servers speaking the wire contracts above, backed by the mocks.
// They bind immediately; stop with the returned handle.
class MockServer {
  public:
    ~MockServer();
    int port() const { return port_; }
    void stop();

    // Corpus-count service over the given corpus (kept alive by the caller).
    static std::unique_ptr<MockServer> serve_corpus(MockCorpus& corpus, int port = 0);
    // Embedding + text generation service backed by the deterministic mocks.
    static std::unique_ptr<MockServer> serve_providers(int port = 0, size_t embed_dim = 64);

  private:
    struct Impl;
    explicit MockServer(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

} // namespace bookmem
