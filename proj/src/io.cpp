#include "bookmem/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bookmem::io {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

namespace {

json parse(const std::string& text, const std::string& context) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError("invalid JSON in " + context + ": " + e.what());
    }
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        fn(parse(line, path + ":" + std::to_string(line_no)));
    }
}

json profile_to_json(const NormalizationProfile& p) {
    return {{"mode", p.mode == MatchMode::soft ? "soft" : "exact"},
            {"casefold", p.casefold},
            {"quote_unification", p.quote_unification}};
}

NormalizationProfile profile_from_json(const json& j) {
    NormalizationProfile p;
    p.mode = j.at("mode").get<std::string>() == "soft" ? MatchMode::soft : MatchMode::exact;
    p.casefold = j.at("casefold").get<bool>();
    p.quote_unification = j.at("quote_unification").get<bool>();
    return p;
}

} // namespace

RawBook read_raw_book(const std::string& text_path, const std::string& sidecar_path) {
    RawBook book;
    book.text = read_file(text_path);
    if (!sidecar_path.empty()) {
        const json meta = parse(read_file(sidecar_path), sidecar_path);
        book.book_id = meta.at("book_id").get<std::string>();
        book.title = meta.value("title", "");
        book.author = meta.value("author", "");
    } else {
        book.book_id = std::filesystem::path(text_path).stem().string();
    }
    return book;
}

void save_book(const TokenizedBook& book, const std::string& path) {
    json j{{"book_id", book.book_id},
           {"title", book.title},
           {"author", book.author},
           {"profile", profile_to_json(book.profile)},
           {"raw_text", book.raw_text}};
    json excerpts = json::array();
    for (const auto& e : book.excerpts)
        excerpts.push_back({{"excerpt_id", e.excerpt_id},
                            {"word_start", e.word_start},
                            {"word_end", e.word_end}});
    j["excerpts"] = excerpts;
    write_file(path, j.dump() + "\n");
}

TokenizedBook load_book(const std::string& path) {
    const json j = parse(read_file(path), path);
    RawBook raw;
    raw.book_id = j.at("book_id").get<std::string>();
    raw.title = j.value("title", "");
    raw.author = j.value("author", "");
    raw.text = j.at("raw_text").get<std::string>();
    TokenizedBook book = tokenize(raw, profile_from_json(j.at("profile")));
    for (const auto& e : j.value("excerpts", json::array())) {
        Excerpt ex;
        ex.excerpt_id = e.at("excerpt_id").get<size_t>();
        ex.word_start = e.at("word_start").get<size_t>();
        ex.word_end = e.at("word_end").get<size_t>();
        if (ex.word_start >= ex.word_end || ex.word_end > book.word_count())
            throw IoError("excerpt range out of bounds in " + path);
        ex.text = span_to_raw(book, ex.word_start, ex.word_end);
        book.excerpts.push_back(std::move(ex));
    }
    return book;
}

void save_excerpts(const TokenizedBook& book, const std::string& path) {
    std::ostringstream os;
    for (const auto& e : book.excerpts)
        os << json{{"book_id", book.book_id},
                   {"excerpt_id", e.excerpt_id},
                   {"word_start", e.word_start},
                   {"word_end", e.word_end},
                   {"text", e.text}}
                  .dump()
           << '\n';
    write_file(path, os.str());
}

void save_prompts(const std::vector<PromptRecord>& prompts, const std::string& path) {
    std::ostringstream os;
    for (const auto& p : prompts)
        os << json{{"excerpt_id", p.excerpt_id},
                   {"instruction", p.instruction},
                   {"target_word_count", p.target_word_count},
                   {"author", p.author},
                   {"summary", p.summary}}
                  .dump()
           << '\n';
    write_file(path, os.str());
}

std::vector<PromptRecord> load_prompts(const std::string& path) {
    std::vector<PromptRecord> prompts;
    for_each_line(path, [&](const json& j) {
        PromptRecord p;
        p.excerpt_id = j.at("excerpt_id").get<size_t>();
        p.instruction = j.at("instruction").get<std::string>();
        p.target_word_count = j.value("target_word_count", size_t{0});
        p.author = j.value("author", "");
        p.summary = j.value("summary", "");
        prompts.push_back(std::move(p));
    });
    return prompts;
}

void save_generations(const std::vector<Generation>& generations, const std::string& path) {
    std::ostringstream os;
    for (const auto& g : generations)
        os << json{{"excerpt_id", g.excerpt_id},
                   {"sample_idx", g.sample_idx},
                   {"model_id", g.model_id},
                   {"text", g.text}}
                  .dump()
           << '\n';
    write_file(path, os.str());
}

std::vector<Generation> load_generations(const std::string& path,
                                         const NormalizationProfile& profile) {
    std::vector<Generation> generations;
    for_each_line(path, [&](const json& j) {
        Generation g;
        g.excerpt_id = j.value("excerpt_id", size_t{0});
        g.sample_idx = j.value("sample_idx", size_t{0});
        g.model_id = j.value("model_id", "");
        g.text = j.at("text").get<std::string>();
        g.words = normalize_words(g.text, profile);
        generations.push_back(std::move(g));
    });
    return generations;
}

void save_match_spans(const std::vector<MatchSpan>& spans, const std::string& path) {
    std::ostringstream os;
    for (const auto& s : spans)
        os << json{{"book_start", s.book_start},
                   {"book_end", s.book_end},
                   {"gen_start", s.gen_start},
                   {"gen_end", s.gen_end}}
                  .dump()
           << '\n';
    write_file(path, os.str());
}

void save_report(const BmcReport& report, size_t mask_bits, const std::string& path) {
    json j{{"book_id", report.book_id},
           {"model_id", report.model_id},
           {"bmc", report.bmc},
           {"longest_block_words", report.longest_block_words},
           {"longest_regurgitated_words", report.longest_regurgitated_words},
           {"n_spans_over_threshold", report.n_spans_over_threshold},
           {"mask_bits", mask_bits},
           {"mask_rle", mask_to_rle(report.mask)}};
    write_file(path, j.dump(2) + "\n");
}

BmcReport load_report(const std::string& path) {
    const json j = parse(read_file(path), path);
    BmcReport r;
    r.book_id = j.at("book_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.bmc = j.at("bmc").get<double>();
    r.longest_block_words = j.at("longest_block_words").get<size_t>();
    r.longest_regurgitated_words = j.at("longest_regurgitated_words").get<size_t>();
    r.n_spans_over_threshold = j.at("n_spans_over_threshold").get<size_t>();
    r.mask = mask_from_rle(j.at("mask_rle").get<std::string>(), j.at("mask_bits").get<size_t>());
    return r;
}

void save_evidence(const CrossParagraphResult& result, const std::string& path) {
    std::ostringstream os;
    os << json{{"ratio", result.ratio}}.dump() << '\n';
    for (const auto& ev : result.evidence)
        os << json{{"book_start", ev.book_start},
                   {"book_end", ev.book_end},
                   {"source_excerpts", ev.source_excerpts},
                   {"target_excerpt", ev.target_excerpt},
                   {"is_cross", ev.is_cross},
                   {"model_id", ev.model_id},
                   {"setting", ev.setting}}
                  .dump()
           << '\n';
    write_file(path, os.str());
}

CrossParagraphResult load_evidence(const std::string& path) {
    CrossParagraphResult result;
    bool first = true;
    for_each_line(path, [&](const json& j) {
        if (first) {
            result.ratio = j.at("ratio").get<double>();
            first = false;
            return;
        }
        SpanEvidence ev;
        ev.book_start = j.at("book_start").get<size_t>();
        ev.book_end = j.at("book_end").get<size_t>();
        for (const auto& s : j.at("source_excerpts")) ev.source_excerpts.insert(s.get<size_t>());
        ev.target_excerpt = j.at("target_excerpt").get<size_t>();
        ev.is_cross = j.at("is_cross").get<bool>();
        ev.model_id = j.value("model_id", "");
        ev.setting = j.value("setting", "");
        result.evidence.push_back(std::move(ev));
    });
    return result;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

std::string rank_rows_csv(const std::vector<RankSummaryRow>& rows) {
    std::ostringstream os;
    os << "group,N,mean_rank,top10_rate\n";
    for (const auto& r : rows)
        os << csv_escape(r.group) << ',' << r.n << ',' << fmt(r.mean_rank) << ','
           << fmt(r.top10_rate) << '\n';
    return os.str();
}

std::string absence_csv(const AbsenceReport& report) {
    std::ostringstream os;
    os << "bin,n_queried,exact_absent,exact_absence_rate,soft_absent,soft_absence_rate\n";
    for (const auto& b : report.bins)
        os << csv_escape(b.label) << ',' << b.n_queried << ',' << b.exact_absent << ','
           << fmt(b.exact_absence_rate) << ',' << b.soft_absent << ',' << fmt(b.soft_absence_rate)
           << '\n';
    return os.str();
}

std::string mask_pair_stats_json(const std::string& model_a, const std::string& model_b,
                                 const MaskPairStats& stats) {
    return json{{"model_a", model_a},
                {"model_b", model_b},
                {"jaccard", stats.jaccard},
                {"both_empty", stats.both_empty},
                {"shuffled_baseline_mean", stats.shuffled_baseline_mean},
                {"self_agreement_a", stats.self_agreement_a},
                {"self_agreement_b", stats.self_agreement_b},
                {"normalized_overlap", stats.normalized_overlap}}
               .dump(2) +
           "\n";
}

std::string matrix_csv(const std::vector<std::string>& models,
                       const std::vector<std::vector<double>>& values) {
    std::ostringstream os;
    os << "model";
    for (const auto& m : models) os << ',' << csv_escape(m);
    os << '\n';
    for (size_t i = 0; i < models.size(); ++i) {
        os << csv_escape(models[i]);
        for (size_t j = 0; j < models.size(); ++j) os << ',' << fmt(values[i][j]);
        os << '\n';
    }
    return os.str();
}

std::string metrics_bar_chart_svg(const BmcReport& report) {
    struct Bar {
        std::string label;
        double value;
        double scale; // value / scale clamps bar height to [0,1]
    };
    const double span_max = 200.0, count_max = 50.0;
    const std::vector<Bar> bars{
        {"bmc", report.bmc, 1.0},
        {"longest_block", static_cast<double>(report.longest_block_words), span_max},
        {"longest_regurg", static_cast<double>(report.longest_regurgitated_words), span_max},
        {"spans_gt20", static_cast<double>(report.n_spans_over_threshold), count_max}};

    const int width = 420, height = 240, base = 200, bar_w = 70, gap = 30;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n";
    os << "<text x=\"10\" y=\"16\" font-size=\"13\">" << report.book_id << " / " << report.model_id
       << "</text>\n";
    int x = 20;
    for (const auto& b : bars) {
        const double frac = std::min(1.0, b.scale > 0 ? b.value / b.scale : 0.0);
        const int h = static_cast<int>(frac * 150);
        os << "<rect x=\"" << x << "\" y=\"" << base - h << "\" width=\"" << bar_w
           << "\" height=\"" << h << "\" fill=\"#4878a8\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << base + 14 << "\" font-size=\"10\">" << b.label
           << "</text>\n";
        os << "<text x=\"" << x << "\" y=\"" << base - h - 4 << "\" font-size=\"10\">" << fmt(b.value)
           << "</text>\n";
        x += bar_w + gap;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace bookmem::io
