#include "bookmem/providers.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bookmem/rng.hpp"

namespace bookmem {

using nlohmann::json;

namespace {

uint64_t fnv1a(const std::string& s, uint64_t seed) {
    uint64_t h = 0xCBF29CE484222325ull ^ seed;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001B3ull;
    return h;
}

// Runs op with bounded retries and jittered exponential backoff. op returns
// true on success, false on a retryable failure.
template <typename Op>
void with_retries(const RetryPolicy& retry, const char* what, Op&& op) {
    std::mt19937_64 rng(retry.jitter_seed);
    std::string last_error;
    for (size_t attempt = 0; attempt < std::max<size_t>(retry.max_attempts, 1); ++attempt) {
        if (attempt > 0 && retry.backoff_ms > 0) {
            const uint64_t base = retry.backoff_ms << (attempt - 1);
            std::uniform_int_distribution<uint64_t> jitter(0, base / 2 + 1);
            std::this_thread::sleep_for(std::chrono::milliseconds(base + jitter(rng)));
        }
        if (op(last_error)) return;
    }
    throw ProviderError(std::string(what) + " failed after retries: " + last_error);
}

} // namespace

// ---------------------------------------------------------------------------
// MockEmbedder

EmbeddingVector MockEmbedder::embed_one(const std::string& text) const {
    EmbeddingVector v(dim_, 0.0);
    const auto words = normalize_words(text, NormalizationProfile::soft());
    for (const auto& w : words) {
        const uint64_t h = fnv1a(w, 0);
        for (size_t j = 0; j < dim_; ++j) {
            const uint64_t hj = mix64(h ^ mix64(j));
            // Map to [-1, 1).
            v[j] += static_cast<double>(static_cast<int64_t>(hj)) / 9.223372036854776e18;
        }
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    if (norm == 0.0) v[fnv1a(text, 1) % dim_] = 1.0;
    return v;
}

std::vector<EmbeddingVector> MockEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

// ---------------------------------------------------------------------------
// MockTextProvider

std::string MockTextProvider::complete(const std::string& prompt, size_t max_words) {
    const auto blank = prompt.find("\n\n");
    const std::string payload = blank == std::string::npos ? prompt : prompt.substr(blank + 2);
    const auto words = normalize_words(payload, NormalizationProfile::soft());
    std::string out = "summary:";
    for (size_t i = 0; i < words.size() && i < max_words; ++i) {
        out.push_back(' ');
        out += words[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// HTTP providers

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string host, int port, RetryPolicy retry)
    : host_(std::move(host)), port_(port), retry_(retry) {}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    json request{{"texts", texts}};
    std::vector<EmbeddingVector> out;
    with_retries(retry_, "embedding request", [&](std::string& err) {
        httplib::Client client(host_, port_);
        auto res = client.Post("/embed", request.dump(), "application/json");
        if (!res || res->status >= 500) {
            err = res ? "HTTP " + std::to_string(res->status) : "connection failed";
            return false;
        }
        if (res->status != 200) throw ProviderError("embedding request rejected: HTTP " +
                                                    std::to_string(res->status));
        out = json::parse(res->body).at("vectors").get<std::vector<EmbeddingVector>>();
        return true;
    });
    if (out.size() != texts.size()) throw ProviderError("embedding response count mismatch");
    return out;
}

HttpTextProvider::HttpTextProvider(std::string host, int port, RetryPolicy retry)
    : host_(std::move(host)), port_(port), retry_(retry) {}

std::string HttpTextProvider::complete(const std::string& prompt, size_t max_words) {
    json request{{"prompt", prompt}, {"max_words", max_words}};
    std::string out;
    with_retries(retry_, "completion request", [&](std::string& err) {
        httplib::Client client(host_, port_);
        auto res = client.Post("/complete", request.dump(), "application/json");
        if (!res || res->status >= 500) {
            err = res ? "HTTP " + std::to_string(res->status) : "connection failed";
            return false;
        }
        if (res->status != 200) throw ProviderError("completion request rejected: HTTP " +
                                                    std::to_string(res->status));
        out = json::parse(res->body).at("text").get<std::string>();
        return true;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Corpus

void MockCorpus::add_document(const std::string& text) {
    exact_docs_.push_back(text);
    soft_docs_.push_back(normalize_string(text, NormalizationProfile::soft()));
}

void MockCorpus::load_directory(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        add_document(text);
    }
}

bool MockCorpus::take_failure() {
    if (fail_budget_ == 0) return false;
    --fail_budget_;
    return true;
}

uint64_t MockCorpus::count(MatchMode mode, const std::string& text) {
    if (text.empty()) throw std::invalid_argument("corpus query must be non-empty");
    const bool soft = mode == MatchMode::soft;
    const std::string needle = soft ? normalize_string(text, NormalizationProfile::soft()) : text;
    if (needle.empty()) return 0;
    const auto& docs = soft ? soft_docs_ : exact_docs_;
    uint64_t total = 0;
    for (const auto& doc : docs) {
        size_t pos = 0;
        while ((pos = doc.find(needle, pos)) != std::string::npos) {
            ++total;
            pos += 1;
        }
    }
    return total;
}

HttpCorpusClient::HttpCorpusClient(std::string host, int port, RetryPolicy retry)
    : host_(std::move(host)), port_(port), retry_(retry) {}

uint64_t HttpCorpusClient::count(MatchMode mode, const std::string& text) {
    if (text.empty()) throw std::invalid_argument("corpus query must be non-empty");
    httplib::Params params{{"mode", mode == MatchMode::soft ? "soft" : "exact"}, {"q", text}};
    uint64_t out = 0;
    with_retries(retry_, "corpus count request", [&](std::string& err) {
        httplib::Client client(host_, port_);
        auto res = client.Get("/count", params, httplib::Headers{});
        if (!res || res->status >= 500) {
            err = res ? "HTTP " + std::to_string(res->status) : "connection failed";
            return false;
        }
        if (res->status != 200)
            throw ProviderError("corpus count rejected: HTTP " + std::to_string(res->status));
        out = json::parse(res->body).at("count").get<uint64_t>();
        return true;
    });
    return out;
}

// ---------------------------------------------------------------------------
// MockServer

struct MockServer::Impl {
    httplib::Server server;
    std::thread thread;
    std::unique_ptr<MockEmbedder> embedder;
    std::unique_ptr<MockTextProvider> text;
};

MockServer::MockServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

MockServer::~MockServer() { stop(); }

void MockServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
    if (impl_ && impl_->thread.joinable()) impl_->thread.join();
}

std::unique_ptr<MockServer> MockServer::serve_corpus(MockCorpus& corpus, int port) {
    auto impl = std::make_unique<Impl>();
    impl->server.Get("/count", [&corpus](const httplib::Request& req, httplib::Response& res) {
        if (corpus.take_failure()) {
            res.status = 503;
            return;
        }
        const std::string mode = req.get_param_value("mode");
        const std::string q = req.get_param_value("q");
        if ((mode != "exact" && mode != "soft") || q.empty()) {
            res.status = 400;
            res.set_content(R"({"error":"bad request"})", "application/json");
            return;
        }
        const uint64_t n = corpus.count(mode == "soft" ? MatchMode::soft : MatchMode::exact, q);
        res.set_content(json{{"count", n}}.dump(), "application/json");
    });

    auto out = std::unique_ptr<MockServer>(new MockServer(std::move(impl)));
    out->port_ = port > 0 ? port : out->impl_->server.bind_to_any_port("127.0.0.1");
    if (port > 0 && !out->impl_->server.bind_to_port("127.0.0.1", port))
        throw ProviderError("failed to bind mock server port " + std::to_string(port));
    auto* srv = &out->impl_->server;
    out->impl_->thread = std::thread([srv] { srv->listen_after_bind(); });
    srv->wait_until_ready();
    return out;
}

std::unique_ptr<MockServer> MockServer::serve_providers(int port, size_t embed_dim) {
    auto impl = std::make_unique<Impl>();
    impl->embedder = std::make_unique<MockEmbedder>(embed_dim);
    impl->text = std::make_unique<MockTextProvider>();
    auto* embedder = impl->embedder.get();
    auto* text = impl->text.get();
    impl->server.Post("/embed", [embedder](const httplib::Request& req, httplib::Response& res) {
        const auto texts = json::parse(req.body).at("texts").get<std::vector<std::string>>();
        res.set_content(json{{"vectors", embedder->embed(texts)}}.dump(), "application/json");
    });
    impl->server.Post("/complete", [text](const httplib::Request& req, httplib::Response& res) {
        const auto body = json::parse(req.body);
        const auto out = text->complete(body.at("prompt").get<std::string>(),
                                        body.at("max_words").get<size_t>());
        res.set_content(json{{"text", out}}.dump(), "application/json");
    });

    auto out = std::unique_ptr<MockServer>(new MockServer(std::move(impl)));
    out->port_ = port > 0 ? port : out->impl_->server.bind_to_any_port("127.0.0.1");
    if (port > 0 && !out->impl_->server.bind_to_port("127.0.0.1", port))
        throw ProviderError("failed to bind mock server port " + std::to_string(port));
    auto* srv = &out->impl_->server;
    out->impl_->thread = std::thread([srv] { srv->listen_after_bind(); });
    srv->wait_until_ready();
    return out;
}

} // namespace bookmem
