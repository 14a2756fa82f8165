#include <catch2/catch.hpp>

#include <random>

#include "duterm/metrics.hpp"

#include "oracles.hpp"

using namespace duterm;

namespace {

std::string join(const oracle::Tokens& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += " ";
        out += t;
    }
    return out;
}

} // namespace

TEST_CASE("BLEU identity and hand-computed unigram precision", "[metrics]") {
    std::vector<std::string> corpus = {"the quick brown fox jumps over the lazy dog",
                                       "every packet filter logs traffic at the edge node"};
    CHECK(corpus_bleu(corpus, corpus) == Approx(100.0).margin(1e-9));

    // "the the the the the the the" vs "the cat is on the mat":
    // clipped unigram precision 2/7
    MetricConfig unigram;
    unigram.bleu_max_order = 1;
    std::vector<std::string> hyp = {"the the the the the the the"};
    std::vector<std::string> ref = {"the cat is on the mat"};
    BleuStats stats = bleu_sentence_stats(hyp[0], ref[0], unigram);
    CHECK(stats.correct[0] == 2);
    CHECK(stats.total[0] == 7);
    CHECK(corpus_bleu(hyp, ref, unigram) == Approx(100.0 * 2.0 / 7.0).margin(1e-9));
}

TEST_CASE("BLEU honors the brevity penalty and zero-precision rule", "[metrics]") {
    MetricConfig cfg;
    cfg.bleu_max_order = 1;
    // hyp shorter than ref: BP = exp(1 - r/c) = exp(1 - 4/2)
    double scored = corpus_bleu({"a b"}, {"a b c d"}, cfg);
    CHECK(scored == Approx(100.0 * std::exp(1.0 - 2.0) * 1.0).margin(1e-9));

    // disjoint vocab: p1 = 0 -> score 0
    CHECK(corpus_bleu({"x y z"}, {"a b c"}, cfg) == 0.0);

    // order with no hypothesis n-grams -> 0 under the no-smoothing rule
    MetricConfig big;
    big.bleu_max_order = 4;
    CHECK(corpus_bleu({"one two"}, {"one two"}, big) == 0.0);

    CHECK_THROWS_AS(corpus_bleu({}, {}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(corpus_bleu({"a"}, {"a", "b"}, cfg), std::invalid_argument);
}

TEST_CASE("BLEU is permutation invariant at corpus level", "[metrics]") {
    std::vector<std::string> hyps = {"alpha beta gamma delta", "data pipeline ships today",
                                     "the risk engine is live"};
    std::vector<std::string> refs = {"alpha beta gamma epsilon", "data pipeline shipped today",
                                     "a risk engine went live"};
    double straight = corpus_bleu(hyps, refs);
    std::vector<std::string> hyps2 = {hyps[2], hyps[0], hyps[1]};
    std::vector<std::string> refs2 = {refs[2], refs[0], refs[1]};
    CHECK(corpus_bleu(hyps2, refs2) == Approx(straight).margin(1e-12));
}

TEST_CASE("BLEU equals the brute-force oracle on exhaustive short corpora",
          "[metrics][oracle]") {
    const std::vector<std::string> vocab = {"aa", "bb", "cc"};
    std::vector<oracle::Tokens> sentences;
    for (int len = 1; len <= 4; ++len) {
        std::vector<oracle::Tokens> next;
        if (len == 1) {
            for (const auto& w : vocab) next.push_back({w});
        } else {
            for (const auto& prefix : sentences) {
                if (static_cast<int>(prefix.size()) != len - 1) continue;
                for (const auto& w : vocab) {
                    oracle::Tokens extended = prefix;
                    extended.push_back(w);
                    next.push_back(extended);
                }
            }
        }
        sentences.insert(sentences.end(), next.begin(), next.end());
    }
    REQUIRE(sentences.size() == 120); // 3 + 9 + 27 + 81

    for (int order : {1, 2, 4}) {
        MetricConfig cfg;
        cfg.bleu_max_order = order;
        for (const auto& hyp : sentences) {
            for (const auto& ref : sentences) {
                double got = corpus_bleu({join(hyp)}, {join(ref)}, cfg);
                double want = oracle::bleu({hyp}, {ref}, order);
                if (std::abs(got - want) > 1e-9) {
                    INFO("order=" << order << " hyp=\"" << join(hyp) << "\" ref=\"" << join(ref)
                                  << "\"");
                    REQUIRE(got == Approx(want).margin(1e-9));
                }
            }
        }
    }
}

TEST_CASE("chrF identities and disjoint-support zero", "[metrics]") {
    std::vector<std::string> corpus = {"Die Wolke ist schnell", "Der Rechner antwortet"};
    CHECK(chrf2pp(corpus, corpus) == Approx(100.0).margin(1e-9));
    CHECK(chrf2pp({"abc"}, {"abc"}) == Approx(100.0).margin(1e-9)); // shorter than char order
    CHECK(chrf2pp({"aaaa"}, {"zzzz"}) == 0.0);
    CHECK_THROWS_AS(chrf2pp({}, {}), std::invalid_argument);
}

TEST_CASE("chrF beta weighting is asymmetric by design", "[metrics]") {
    MetricConfig beta1;
    beta1.chrf_beta = 1.0;
    std::vector<std::string> a = {"abcd efgh"};
    std::vector<std::string> b = {"abcd ijkl"};
    CHECK(chrf2pp(a, b, beta1) == Approx(chrf2pp(b, a, beta1)).margin(1e-9));

    MetricConfig beta2; // default beta = 2: swapping sides must move the score
    double fwd = chrf2pp({"abcd"}, {"abcd efgh"}, beta2);
    double rev = chrf2pp({"abcd efgh"}, {"abcd"}, beta2);
    CHECK(std::abs(fwd - rev) > 1e-6);
}

TEST_CASE("chrF2++ equals an independent F-score oracle on random corpora",
          "[metrics][oracle]") {
    std::mt19937_64 gen(31337);
    const std::vector<std::string> vocab = {"cloud", "server", "edge", "node", "rate",
                                            "swap",  "risk",   "book", "wire", "cycle"};
    MetricConfig cfg;
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<std::string> hyps, refs;
        std::vector<oracle::Tokens> hyp_tokens, ref_tokens;
        std::size_t corpus_size = 1 + gen() % 4;
        for (std::size_t s = 0; s < corpus_size; ++s) {
            oracle::Tokens h, r;
            for (int w = 0; w < static_cast<int>(1 + gen() % 8); ++w)
                h.push_back(vocab[gen() % vocab.size()]);
            for (int w = 0; w < static_cast<int>(1 + gen() % 8); ++w)
                r.push_back(vocab[gen() % vocab.size()]);
            hyps.push_back(join(h));
            refs.push_back(join(r));
            hyp_tokens.push_back(h);
            ref_tokens.push_back(r);
        }
        double got = chrf2pp(hyps, refs, cfg);
        double want = oracle::chrf(hyps, refs, hyp_tokens, ref_tokens, cfg.chrf_char_order,
                                   cfg.chrf_word_order, cfg.chrf_beta);
        INFO("iter=" << iter);
        REQUIRE(got == Approx(want).margin(1e-9));
    }
}

TEST_CASE("chrF char n-grams are code-point aware", "[metrics]") {
    // identical Cyrillic corpora must hit the identity even though every
    // character is multi-byte
    std::vector<std::string> ru = {"облако быстрое", "сервер отвечает"};
    CHECK(chrf2pp(ru, ru) == Approx(100.0).margin(1e-9));
}

TEST_CASE("terminology success rate counts required terms micro-averaged", "[metrics]") {
    TermDictionary proper({"en", "de"});
    proper.add({"cloud", "Wolke", 0, TermOrigin::dev_file});
    proper.add({"server", "Rechner", 0, TermOrigin::dev_file});
    TermDictionary random({"en", "de"});
    random.add({"spare a", "ErsatzA", 0, TermOrigin::dev_file});

    MetricConfig cfg;

    SECTION("full satisfaction is 1.0") {
        std::vector<EvalSegment> segments = {
            {1, "the cloud is up", "die Wolke ist oben"},
            {2, "cloud meets server", "Wolke trifft Rechner"}};
        SrResult sr = terminology_sr(segments, TerminologyMode::proper, proper, random, cfg, 0);
        CHECK(sr.micro == Approx(1.0));
        CHECK(sr.macro == Approx(1.0));
        CHECK(sr.required == 3);
    }
    SECTION("two of three terms present gives 2/3") {
        std::vector<EvalSegment> segments = {
            {1, "cloud meets server twice cloud", "Wolke und Rechner"}};
        // required: cloud, server (per-entry, not per-occurrence)
        SrResult sr = terminology_sr(segments, TerminologyMode::proper, proper, random, cfg, 0);
        CHECK(sr.required == 2);

        std::vector<EvalSegment> partial = {{1, "cloud meets server", "nur Wolke hier"}};
        SrResult half = terminology_sr(partial, TerminologyMode::proper, proper, random, cfg, 0);
        CHECK(half.micro == Approx(0.5));

        TermDictionary three({"en", "de"});
        three.add({"a1", "X1", 0, TermOrigin::dev_file});
        three.add({"a2", "X2", 0, TermOrigin::dev_file});
        three.add({"a3", "X3", 0, TermOrigin::dev_file});
        std::vector<EvalSegment> twothirds = {{1, "a1 a2 a3", "X1 X2 only"}};
        SrResult sr23 = terminology_sr(twothirds, TerminologyMode::proper, three, random, cfg, 0);
        CHECK(sr23.micro == Approx(2.0 / 3.0));
    }
    SECTION("term match policy controls case sensitivity") {
        std::vector<EvalSegment> segments = {{1, "the cloud", "die wolke"}};
        SrResult exact = terminology_sr(segments, TerminologyMode::proper, proper, random, cfg, 0);
        CHECK(exact.micro == 0.0);
        MetricConfig ci = cfg;
        ci.term_match_policy = MetricConfig::TermMatchPolicy::case_insensitive;
        SrResult folded = terminology_sr(segments, TerminologyMode::proper, proper, random, ci, 0);
        CHECK(folded.micro == Approx(1.0));
    }
    SECTION("hypotheses are tag-stripped before matching") {
        std::vector<EvalSegment> segments = {{1, "the cloud", "die [TERM]Wolke[/TERM]"}};
        SrResult sr = terminology_sr(segments, TerminologyMode::proper, proper, random, cfg, 0);
        CHECK(sr.micro == Approx(1.0));
    }
    SECTION("empty record list is an error") {
        CHECK_THROWS_AS(terminology_sr({}, TerminologyMode::proper, proper, random, cfg, 0),
                        std::invalid_argument);
    }
    SECTION("monotonicity: adding a missing term never lowers the rate") {
        std::vector<EvalSegment> segments = {{1, "cloud meets server", "nur Wolke"}};
        SrResult before = terminology_sr(segments, TerminologyMode::proper, proper, random, cfg,
                                         0);
        segments[0].hypothesis += " Rechner";
        SrResult after = terminology_sr(segments, TerminologyMode::proper, proper, random, cfg,
                                        0);
        CHECK(after.micro >= before.micro);
    }
    SECTION("matches the naive per-term containment oracle") {
        std::mt19937_64 gen(99);
        const std::vector<std::string> words = {"cloud", "server", "Wolke", "Rechner", "x"};
        for (int iter = 0; iter < 100; ++iter) {
            std::string src, hyp;
            for (int w = 0; w < 6; ++w) {
                src += words[gen() % words.size()] + " ";
                hyp += words[gen() % words.size()] + " ";
            }
            std::vector<EvalSegment> segments = {{1, src, hyp}};
            std::vector<TermPair> required = proper.lookup(src);
            if (required.empty()) continue;
            int found = 0;
            for (const auto& t : required)
                found += oracle::contains_naive(hyp, t.target_term) &&
                                 hyp.find(t.target_term) != std::string::npos
                             ? 1
                             : 0;
            SrResult sr =
                terminology_sr(segments, TerminologyMode::proper, proper, random, cfg, 0);
            CHECK(sr.micro == Approx(static_cast<double>(found) / required.size()));
        }
    }
}

TEST_CASE("report renderer reproduces the reference table layout", "[metrics]") {
    auto row = [](const char* lang, TerminologyMode mode, double bleu, double chrf, double sp,
                  double srr) {
        EvalReport r;
        r.direction = LanguagePair{"en", lang};
        r.mode = mode;
        r.bleu = bleu;
        r.chrf2pp = chrf;
        r.sr_proper = sp;
        r.sr_random = srr;
        return r;
    };
    // reference grid, deliberately passed out of order
    std::vector<EvalReport> rows = {
        row("ru", TerminologyMode::random, 32.25, 59.85, 0.42, 0.99),
        row("de", TerminologyMode::noterm, 38.24, 62.61, 0.43, 0.69),
        row("de", TerminologyMode::proper, 48.06, 70.74, 0.98, 0.73),
        row("es", TerminologyMode::random, 53.28, 72.05, 0.49, 0.98),
        row("de", TerminologyMode::random, 43.77, 67.22, 0.48, 0.99),
        row("es", TerminologyMode::noterm, 45.98, 67.05, 0.47, 0.73),
        row("ru", TerminologyMode::noterm, 27.88, 55.29, 0.39, 0.69),
        row("es", TerminologyMode::proper, 58.51, 76.08, 0.99, 0.78),
        row("ru", TerminologyMode::proper, 35.80, 63.57, 0.98, 0.72),
    };
    std::string expected =
        "Lang  Type    BLEU    chrF2++  Prop. SR  Rand. SR\n"
        "----  ------  ------  -------  --------  --------\n"
        "DE    noterm   38.24    62.61      0.43      0.69\n"
        "DE    proper   48.06    70.74      0.98      0.73\n"
        "DE    random   43.77    67.22      0.48      0.99\n"
        "ES    noterm   45.98    67.05      0.47      0.73\n"
        "ES    proper   58.51    76.08      0.99      0.78\n"
        "ES    random   53.28    72.05      0.49      0.98\n"
        "RU    noterm   27.88    55.29      0.39      0.69\n"
        "RU    proper   35.80    63.57      0.98      0.72\n"
        "RU    random   32.25    59.85      0.42      0.99\n";
    CHECK(render_report(rows) == expected);

    CHECK(render_report({}) ==
          "Lang  Type    BLEU    chrF2++  Prop. SR  Rand. SR\n"
          "----  ------  ------  -------  --------  --------\n");
}

TEST_CASE("report JSON round-trips", "[metrics]") {
    EvalReport row;
    row.direction = {"en", "es"};
    row.mode = TerminologyMode::proper;
    row.bleu = 58.51;
    row.chrf2pp = 76.08;
    row.sr_proper = 0.99;
    row.sr_random = 0.78;
    row.sr_proper_macro = 0.985;
    row.sr_random_macro = 0.77;
    row.segment_count = 512;

    nlohmann::json json_rows = report_to_json({row});
    REQUIRE(json_rows.size() == 1);
    EvalReport back = report_row_from_json(json_rows[0]);
    CHECK(back.direction == row.direction);
    CHECK(back.mode == row.mode);
    CHECK(back.bleu == row.bleu);
    CHECK(back.chrf2pp == row.chrf2pp);
    CHECK(back.sr_proper == row.sr_proper);
    CHECK(back.sr_random == row.sr_random);
    CHECK(back.sr_proper_macro == row.sr_proper_macro);
    CHECK(back.sr_random_macro == row.sr_random_macro);
    CHECK(back.segment_count == row.segment_count);
}

TEST_CASE("stats merge associatively across shards", "[metrics][property]") {
    std::mt19937_64 gen(1010);
    const std::vector<std::string> vocab = {"a", "b", "c", "d"};
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<std::string> hyps, refs;
        for (int s = 0; s < 6; ++s) {
            std::string h, r;
            for (int w = 0; w < 5; ++w) {
                h += vocab[gen() % vocab.size()] + " ";
                r += vocab[gen() % vocab.size()] + " ";
            }
            hyps.push_back(h);
            refs.push_back(r);
        }
        MetricConfig cfg;
        // whole corpus in one pass
        BleuStats whole(cfg.bleu_max_order);
        for (std::size_t i = 0; i < hyps.size(); ++i)
            whole.merge(bleu_sentence_stats(hyps[i], refs[i], cfg));
        // two shards merged
        BleuStats shard_a(cfg.bleu_max_order), shard_b(cfg.bleu_max_order);
        for (std::size_t i = 0; i < 3; ++i)
            shard_a.merge(bleu_sentence_stats(hyps[i], refs[i], cfg));
        for (std::size_t i = 3; i < hyps.size(); ++i)
            shard_b.merge(bleu_sentence_stats(hyps[i], refs[i], cfg));
        shard_a.merge(shard_b);
        CHECK(bleu_score_from_stats(whole) == Approx(bleu_score_from_stats(shard_a)).margin(1e-12));
    }
}
