// Command-line front door: ingest -> segment -> prepare -> simulate/score ->
// analyze -> report, over the file formats defined by the library modules.

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bookmem/agreement.hpp"
#include "bookmem/attribution.hpp"
#include "bookmem/coverage.hpp"
#include "bookmem/dataprep.hpp"
#include "bookmem/io.hpp"
#include "bookmem/provenance.hpp"
#include "bookmem/providers.hpp"

using namespace bookmem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

NormalizationProfile profile_by_name(const std::string& name) {
    if (name == "soft") return NormalizationProfile::soft();
    if (name == "exact") return NormalizationProfile::exact();
    throw CLI::ValidationError("profile must be 'exact' or 'soft'");
}

// Accepts either a tokenized-book artifact (.json) or raw UTF-8 text; raw
// text is tokenized and segmented with defaults.
TokenizedBook load_any_book(const std::string& path, const std::string& profile_name) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") return io::load_book(path);
    auto book = tokenize(io::read_raw_book(path), profile_by_name(profile_name));
    segment(book);
    return book;
}

std::string per_excerpt_breakdown_csv(const TokenizedBook& book, const BmcReport& report) {
    std::ostringstream os;
    os << "excerpt_id,word_start,word_end,covered_words,coverage\n";
    for (const auto& e : book.excerpts) {
        size_t covered = 0;
        for (size_t i = e.word_start; i < e.word_end; ++i)
            if (report.mask.test(i)) ++covered;
        const size_t len = e.word_end - e.word_start;
        os << e.excerpt_id << ',' << e.word_start << ',' << e.word_end << ',' << covered << ','
           << (len ? static_cast<double>(covered) / len : 0.0) << '\n';
    }
    return os.str();
}

struct CommonOpts {
    std::string profile = "exact";
    size_t threads = 1;
};

int run(int argc, char** argv) {
    CLI::App app{"bookmem: measure verbatim book memorization in model generations"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags win");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    CommonOpts common;
    app.add_option("--profile", common.profile, "normalization profile: exact|soft")
        ->capture_default_str();
    app.add_option("--threads", common.threads, "worker thread cap")->capture_default_str();

    // ingest ---------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "tokenize a raw book text file");
    std::string in_text, in_meta, out_book;
    ingest->add_option("--text", in_text, "UTF-8 book text file")->required();
    ingest->add_option("--meta", in_meta, "JSON sidecar {book_id, title, author}");
    ingest->add_option("--out", out_book, "tokenized book artifact path")->required();

    // segment --------------------------------------------------------------
    auto* seg = app.add_subcommand("segment", "split a book into excerpts");
    std::string seg_book, seg_out_book, seg_excerpts;
    size_t seg_min = 300, seg_max = 500;
    seg->add_option("--book", seg_book, "book artifact from ingest")->required();
    seg->add_option("--min", seg_min, "minimum excerpt words")->capture_default_str();
    seg->add_option("--max", seg_max, "maximum excerpt words")->capture_default_str();
    seg->add_option("--out-book", seg_out_book, "updated book artifact (defaults to --book)");
    seg->add_option("--excerpts", seg_excerpts, "excerpt ndjson output");

    // prepare --------------------------------------------------------------
    auto* prep = app.add_subcommand("prepare", "build summary prompts and the finetune dataset");
    std::string prep_book, prep_prompts, prep_dataset, prep_host;
    int prep_port = 0;
    prep->add_option("--book", prep_book)->required();
    prep->add_option("--prompts", prep_prompts, "prompt ndjson output")->required();
    prep->add_option("--dataset", prep_dataset, "finetune {input,output} ndjson output");
    prep->add_option("--provider-host", prep_host, "text provider host (mock when unset)");
    prep->add_option("--provider-port", prep_port);

    // simulate -------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "sample from the synthetic memorizing model");
    std::string sim_book, sim_out, sim_model = "simulator", sim_planted;
    double sim_p = 1.0;
    size_t sim_replay = 0, sim_samples = 100;
    uint64_t sim_seed = 0;
    sim->add_option("--book", sim_book)->required();
    sim->add_option("--p", sim_p, "memorization probability")->capture_default_str();
    sim->add_option("--replay-len", sim_replay, "replayed words per sample (0 = full excerpt)")
        ->capture_default_str();
    sim->add_option("--samples", sim_samples)->capture_default_str();
    sim->add_option("--seed", sim_seed)->capture_default_str();
    sim->add_option("--model-id", sim_model)->capture_default_str();
    sim->add_option("--out", sim_out, "generation ndjson output")->required();
    sim->add_option("--planted", sim_planted, "planted-span ndjson (ground truth for tests)");

    // score ----------------------------------------------------------------
    auto* score = app.add_subcommand("score", "compute the coverage report for one model");
    std::string score_book, score_gens, score_prompts, score_out, score_breakdown, score_model;
    BmcConfig bmc_cfg;
    score->add_option("--book", score_book, "book artifact or raw .txt")->required();
    score->add_option("--generations", score_gens)->required();
    score->add_option("--prompts", score_prompts, "prompts for instruction trimming");
    score->add_option("--k", bmc_cfg.k)->capture_default_str();
    score->add_option("--m", bmc_cfg.m)->capture_default_str();
    score->add_option("--threshold", bmc_cfg.span_count_threshold)->capture_default_str();
    score->add_option("--model-id", score_model);
    score->add_option("--out", score_out, "report JSON output")->required();
    score->add_option("--breakdown", score_breakdown, "per-excerpt coverage CSV");

    // stats ----------------------------------------------------------------
    auto* stats = app.add_subcommand("stats", "span statistics without trimming");
    std::string stats_book, stats_gens, stats_out;
    size_t stats_k = 5, stats_threshold = 20;
    stats->add_option("--book", stats_book)->required();
    stats->add_option("--generations", stats_gens)->required();
    stats->add_option("--k", stats_k)->capture_default_str();
    stats->add_option("--threshold", stats_threshold)->capture_default_str();
    stats->add_option("--out", stats_out, "stats JSON output (stdout when unset)");

    // crosspara ------------------------------------------------------------
    auto* cross = app.add_subcommand("crosspara", "cross-paragraph ratio and semantic ranks");
    std::string cross_book, cross_gens, cross_prompts, cross_out, cross_ranks, cross_host,
        cross_model;
    int cross_port = 0;
    size_t cross_k = 5, cross_min_span = 20;
    uint64_t cross_seed = 0;
    cross->add_option("--book", cross_book)->required();
    cross->add_option("--generations", cross_gens)->required();
    cross->add_option("--prompts", cross_prompts, "prompt file for semantic ranking");
    cross->add_option("--k", cross_k)->capture_default_str();
    cross->add_option("--min-span", cross_min_span)->capture_default_str();
    cross->add_option("--model-id", cross_model);
    cross->add_option("--seed", cross_seed)->capture_default_str();
    cross->add_option("--out", cross_out, "evidence ndjson output")->required();
    cross->add_option("--ranks", cross_ranks, "semantic rank CSV output");
    cross->add_option("--embed-host", cross_host, "embedding provider host (mock when unset)");
    cross->add_option("--embed-port", cross_port);

    // agree ----------------------------------------------------------------
    auto* agree = app.add_subcommand("agree", "cross-model mask agreement statistics");
    std::vector<std::string> agree_reports;
    std::string agree_dir;
    size_t agree_trials = 100;
    uint64_t agree_seed = 0;
    double agree_self_a = 1.0, agree_self_b = 1.0;
    agree->add_option("--reports", agree_reports, "report JSON files (two or more models)")
        ->required()
        ->expected(-2);
    agree->add_option("--out-dir", agree_dir)->required();
    agree->add_option("--shuffle-trials", agree_trials)->capture_default_str();
    agree->add_option("--seed", agree_seed)->capture_default_str();
    agree->add_option("--self-a", agree_self_a, "split-half self-agreement of model A")
        ->capture_default_str();
    agree->add_option("--self-b", agree_self_b, "split-half self-agreement of model B")
        ->capture_default_str();

    auto* selfcmd = app.add_subcommand("selfagree", "split-half self-agreement for one model");
    std::string self_book, self_gens, self_prompts;
    size_t self_trials = 10;
    uint64_t self_seed = 0;
    BmcConfig self_cfg;
    selfcmd->add_option("--book", self_book)->required();
    selfcmd->add_option("--generations", self_gens)->required();
    selfcmd->add_option("--prompts", self_prompts);
    selfcmd->add_option("--k", self_cfg.k)->capture_default_str();
    selfcmd->add_option("--m", self_cfg.m)->capture_default_str();
    selfcmd->add_option("--trials", self_trials)->capture_default_str();
    selfcmd->add_option("--seed", self_seed)->capture_default_str();

    // provenance -----------------------------------------------------------
    auto* prov = app.add_subcommand("provenance", "search top spans against a corpus service");
    std::string prov_book, prov_gens, prov_csv, prov_json, prov_host, prov_dir;
    int prov_port = 0;
    size_t prov_k = 5, prov_n = 50;
    std::vector<size_t> prov_bins = {50, 100, 150};
    prov->add_option("--book", prov_book)->required();
    prov->add_option("--generations", prov_gens)->required();
    prov->add_option("--k", prov_k)->capture_default_str();
    prov->add_option("--top", prov_n, "number of longest distinct spans")->capture_default_str();
    prov->add_option("--bins", prov_bins, "length bin edges in words")->capture_default_str();
    prov->add_option("--host", prov_host, "corpus-count service host");
    prov->add_option("--port", prov_port);
    prov->add_option("--corpus-dir", prov_dir, "directory of text files for the local mock");
    prov->add_option("--out-csv", prov_csv)->required();
    prov->add_option("--out-json", prov_json);

    // report ---------------------------------------------------------------
    auto* rep = app.add_subcommand("report", "merge reports into CSV tables and charts");
    std::vector<std::string> rep_reports;
    std::string rep_dir;
    rep->add_option("--reports", rep_reports)->required()->expected(-1);
    rep->add_option("--out-dir", rep_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const char* env_host = std::getenv("BOOKMEM_PROVIDER_HOST");
    const char* env_port = std::getenv("BOOKMEM_PROVIDER_PORT");

    if (*ingest) {
        const RawBook raw = io::read_raw_book(in_text, in_meta);
        io::save_book(tokenize(raw, profile_by_name(common.profile)), out_book);
    } else if (*seg) {
        auto book = io::load_book(seg_book);
        segment(book, {seg_min, seg_max});
        io::save_book(book, seg_out_book.empty() ? seg_book : seg_out_book);
        if (!seg_excerpts.empty()) io::save_excerpts(book, seg_excerpts);
        std::cerr << "segmented into " << book.excerpts.size() << " excerpts\n";
    } else if (*prep) {
        const auto book = io::load_book(prep_book);
        std::unique_ptr<TextProvider> provider;
        if (!prep_host.empty())
            provider = std::make_unique<HttpTextProvider>(prep_host, prep_port);
        else if (env_host && env_port)
            provider = std::make_unique<HttpTextProvider>(env_host, std::atoi(env_port));
        else
            provider = std::make_unique<MockTextProvider>();
        const auto prompts = build_prompts(*provider, book);
        io::save_prompts(prompts, prep_prompts);
        if (!prep_dataset.empty()) export_finetune_dataset(prompts, book.excerpts, prep_dataset);
    } else if (*sim) {
        const auto book = io::load_book(sim_book);
        SimulatorConfig cfg;
        cfg.p_memorize = sim_p;
        cfg.replay_len = sim_replay;
        cfg.seed = sim_seed;
        cfg.model_id = sim_model;
        const auto result = simulate_generations(book, {}, cfg, sim_samples);
        io::save_generations(result.generations, sim_out);
        if (!sim_planted.empty()) {
            std::ostringstream os;
            for (const auto& p : result.planted)
                os << json{{"excerpt_id", p.excerpt_id},
                           {"sample_idx", p.sample_idx},
                           {"book_start", p.book_start},
                           {"book_end", p.book_end}}
                          .dump()
                   << '\n';
            io::write_file(sim_planted, os.str());
        }
    } else if (*score) {
        const auto book = load_any_book(score_book, common.profile);
        const auto gens = io::load_generations(score_gens, book.profile);
        const auto prompts =
            score_prompts.empty() ? std::vector<PromptRecord>{} : io::load_prompts(score_prompts);
        bmc_cfg.threads = common.threads;
        const auto report = bmc(book, prompts, gens, bmc_cfg, score_model);
        io::save_report(report, book.word_count(), score_out);
        if (!score_breakdown.empty())
            io::write_file(score_breakdown, per_excerpt_breakdown_csv(book, report));
        std::cout << "bmc@" << bmc_cfg.k << " = " << report.bmc << "\n";
    } else if (*stats) {
        const auto book = load_any_book(stats_book, common.profile);
        const auto gens = io::load_generations(stats_gens, book.profile);
        const json out{
            {"book_id", book.book_id},
            {"longest_regurgitated_words", longest_regurgitated_span(gens, book, stats_k)},
            {"n_spans_over_threshold",
             count_spans_over_threshold(gens, book, stats_k, stats_threshold)}};
        if (stats_out.empty())
            std::cout << out.dump(2) << "\n";
        else
            io::write_file(stats_out, out.dump(2) + "\n");
    } else if (*cross) {
        const auto book = io::load_book(cross_book);
        const auto gens = io::load_generations(cross_gens, book.profile);
        const auto result =
            cross_paragraph_ratio(book, gens, cross_k, cross_min_span, cross_model);
        io::save_evidence(result, cross_out);
        std::cout << "cross-paragraph ratio = " << result.ratio << "\n";
        if (!cross_ranks.empty()) {
            const auto prompts = io::load_prompts(cross_prompts);
            if (prompts.size() != book.excerpts.size())
                throw io::IoError("need one prompt per excerpt for semantic ranking");
            std::unique_ptr<EmbeddingProvider> embedder;
            if (!cross_host.empty())
                embedder = std::make_unique<HttpEmbeddingProvider>(cross_host, cross_port);
            else
                embedder = std::make_unique<MockEmbedder>();
            std::vector<std::string> prompt_texts, excerpt_texts;
            for (const auto& p : prompts) prompt_texts.push_back(p.summary);
            for (const auto& e : book.excerpts) excerpt_texts.push_back(e.text);
            const auto prompt_vecs = embedder->embed(prompt_texts);
            const auto excerpt_vecs = embedder->embed(excerpt_texts);
            const auto analysis = semantic_rank_analysis(result.evidence, prompt_vecs,
                                                         excerpt_vecs, cross_seed, book.book_id);
            io::write_file(cross_ranks, io::rank_rows_csv(analysis.rows));
        }
    } else if (*agree) {
        std::map<std::string, std::map<std::string, BmcReport>> by_model; // model -> book -> report
        for (const auto& path : agree_reports) {
            auto r = io::load_report(path);
            by_model[r.model_id][r.book_id] = std::move(r);
        }
        if (by_model.size() < 2) throw io::IoError("agree needs reports from >= 2 model_ids");
        std::filesystem::create_directories(agree_dir);
        std::vector<std::string> models;
        for (const auto& [m, _] : by_model) models.push_back(m);

        auto concat_masks = [&](const std::string& ma, const std::string& mb) {
            std::vector<size_t> sizes;
            size_t total = 0;
            std::vector<std::pair<const CoverageMask*, const CoverageMask*>> pairs;
            for (const auto& [book_id, ra] : by_model[ma]) {
                const auto it = by_model[mb].find(book_id);
                if (it == by_model[mb].end()) continue;
                pairs.emplace_back(&ra.mask, &it->second.mask);
                total += ra.mask.size();
            }
            CoverageMask a(total), b(total);
            size_t off = 0;
            for (const auto& [pa, pb] : pairs) {
                if (pa->size() != pb->size())
                    throw io::IoError("mask sizes disagree between models for a shared book");
                for (size_t i = 0; i < pa->size(); ++i) {
                    if (pa->test(i)) a.set(off + i);
                    if (pb->test(i)) b.set(off + i);
                }
                off += pa->size();
            }
            return std::make_pair(a, b);
        };

        std::vector<std::vector<double>> jmatrix(models.size(),
                                                 std::vector<double>(models.size(), 1.0));
        for (size_t i = 0; i < models.size(); ++i) {
            for (size_t j = i + 1; j < models.size(); ++j) {
                const auto [a, b] = concat_masks(models[i], models[j]);
                if (a.size() == 0)
                    throw io::IoError("models " + models[i] + " and " + models[j] +
                                      " share no books");
                const auto stats_ij =
                    mask_pair_stats(a, b, agree_self_a, agree_self_b, agree_trials, agree_seed);
                jmatrix[i][j] = jmatrix[j][i] = stats_ij.jaccard;
                io::write_file(agree_dir + "/pair_" + models[i] + "_" + models[j] + ".json",
                               io::mask_pair_stats_json(models[i], models[j], stats_ij));
            }
        }
        io::write_file(agree_dir + "/jaccard_matrix.csv", io::matrix_csv(models, jmatrix));

        // Per-book bmc correlation matrix when enough shared books exist.
        std::set<std::string> common_books;
        for (const auto& [book_id, _] : by_model[models[0]]) {
            bool everywhere = true;
            for (const auto& m : models)
                if (!by_model[m].count(book_id)) everywhere = false;
            if (everywhere) common_books.insert(book_id);
        }
        if (common_books.size() >= 2) {
            std::vector<std::vector<double>> series;
            for (const auto& m : models) {
                std::vector<double> xs;
                for (const auto& book_id : common_books) xs.push_back(by_model[m][book_id].bmc);
                series.push_back(xs);
            }
            std::vector<std::vector<double>> pmatrix(models.size(),
                                                     std::vector<double>(models.size(), 1.0));
            bool ok = true;
            for (size_t i = 0; i < models.size() && ok; ++i)
                for (size_t j = i + 1; j < models.size() && ok; ++j) {
                    try {
                        pmatrix[i][j] = pmatrix[j][i] = pearson(series[i], series[j]);
                    } catch (const std::invalid_argument&) {
                        ok = false; // degenerate variance: skip the matrix
                    }
                }
            if (ok) io::write_file(agree_dir + "/bmc_pearson_matrix.csv",
                                   io::matrix_csv(models, pmatrix));
        }
    } else if (*selfcmd) {
        const auto book = io::load_book(self_book);
        const auto gens = io::load_generations(self_gens, book.profile);
        const auto prompts =
            self_prompts.empty() ? std::vector<PromptRecord>{} : io::load_prompts(self_prompts);
        self_cfg.threads = common.threads;
        std::cout << split_half_self_agreement(book, prompts, gens, self_cfg, self_trials,
                                               self_seed)
                  << "\n";
    } else if (*prov) {
        const auto book = io::load_book(prov_book);
        const auto gens = io::load_generations(prov_gens, book.profile);
        const BookIndex index(book, prov_k);
        std::vector<MatchSpan> all;
        for (const auto& g : gens)
            for (const auto& s : index.find_contiguous_matches(g.words)) all.push_back(s);
        const auto top = select_top_spans(all, prov_n);

        std::unique_ptr<CorpusClient> client;
        MockCorpus local;
        if (!prov_host.empty()) {
            client = std::make_unique<HttpCorpusClient>(prov_host, prov_port);
        } else if (!prov_dir.empty()) {
            local.load_directory(prov_dir);
            client = nullptr;
        } else {
            throw CLI::ValidationError("provenance needs --host or --corpus-dir");
        }
        const auto results = search_spans(client ? *client : local, book, top);
        const auto report = absence_report(results, prov_bins, book.book_id);
        io::write_file(prov_csv, io::absence_csv(report));
        if (!prov_json.empty()) {
            json spans = json::array();
            for (const auto& r : report.spans)
                spans.push_back({{"book_start", r.book_start},
                                 {"book_end", r.book_end},
                                 {"length", r.length},
                                 {"exact_found", r.exact_found},
                                 {"soft_found", r.soft_found}});
            io::write_file(prov_json,
                           json{{"book_id", book.book_id}, {"spans", spans}}.dump(2) + "\n");
        }
    } else if (*rep) {
        std::filesystem::create_directories(rep_dir);
        std::ostringstream metrics;
        metrics << "book_id,model_id,bmc,longest_block_words,longest_regurgitated_words,"
                   "n_spans_over_threshold\n";
        for (const auto& path : rep_reports) {
            const auto r = io::load_report(path);
            metrics << r.book_id << ',' << r.model_id << ',' << r.bmc << ','
                    << r.longest_block_words << ',' << r.longest_regurgitated_words << ','
                    << r.n_spans_over_threshold << '\n';
            io::write_file(rep_dir + "/chart_" + r.book_id + "_" + r.model_id + ".svg",
                           io::metrics_bar_chart_svg(r));
        }
        io::write_file(rep_dir + "/metrics.csv", metrics.str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
