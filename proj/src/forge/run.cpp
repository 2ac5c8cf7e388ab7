#include "ragloop/forge/run.hpp"

#include "ragloop/eval/dataset.hpp"
#include "ragloop/eval/judge.hpp"
#include "ragloop/text/tokenizer.hpp"
#include "ragloop/util/hash.hpp"
#include "ragloop/util/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

namespace ragloop::forge {

using nlohmann::json;

namespace {

struct PlannedItem {
    std::string article_id;
    Split split{Split::train};
    corpus::Passage main;
    std::vector<corpus::Passage> linked;
    HopMode mode{HopMode::single_hop};
    std::vector<std::string> warnings;
};

std::vector<std::string> split_paragraphs(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        const auto line = text::trim(std::string_view(text).substr(pos, nl - pos));
        if (line.empty()) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            if (!current.empty()) current += ' ';
            current += line;
        }
        pos = nl + 1;
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

void fail(ForgeItem& item, std::string stage, std::string reason, std::string message) {
    item.failed_stage = std::move(stage);
    item.reason = std::move(reason);
    item.message = std::move(message);
}

void run_item(const PlannedItem& plan, ForgeItem& item, const ForgeBackends& backends, const ForgeConfig& config,
              const prompts::PromptRegistry& registry) {
    item.warnings = plan.warnings;
    try {
        PassagePair pair{plan.main, {}};
        HopMode mode = plan.mode;
        if (mode == HopMode::multi_hop) {
            try {
                auto sel = select_supporting(plan.main, plan.linked, *backends.selector, config.parse_retries,
                                             registry);
                pair = std::move(sel.pair);
                item.warnings.insert(item.warnings.end(), sel.warnings.begin(), sel.warnings.end());
            } catch (const ForgeParseError& e) {
                fail(item, "selection", "parse", e.what());
                return;
            }
            if (pair.supporting.empty()) {
                mode = HopMode::single_hop;
                item.warnings.push_back("no supporting passage selected; generated as single-hop");
            }
        }

        GeneratedQuestion question;
        try {
            question = generate_question(pair, mode, *backends.generator, config.parse_retries, registry,
                                         config.generation);
        } catch (const ForgeParseError& e) {
            fail(item, "generation", "parse", e.what());
            return;
        }

        item.annotation = annotate_solution(question, *backends.annotator, config.annotate, registry);
        auto& ann = *item.annotation;
        if (!ann.ok()) {
            if (ann.failure->kind == FailureKind::backend)
                throw ForgeAborted("item " + std::to_string(item.index) + ": " + ann.failure->message);
            fail(item, "annotation", std::string(to_string(ann.failure->kind)), ann.failure->message);
            return;
        }
        if (ann.search_count() == 0) {
            ann.failure = AnnotationFailure{FailureKind::no_search, "the trajectory never searched"};
            fail(item, "annotation", "no_search", ann.failure->message);
            return;
        }

        try {
            const auto v = verify_annotation(question.question, ann.final_answer, question.reference_answer,
                                             *backends.judge, config.judge_retries, registry);
            ann.verification_score = v.score;
            if (!v.keep) {
                item.reason = "verification";
                item.message = "score " + std::to_string(v.score) + " is below " + std::to_string(kKeepThreshold);
            }
        } catch (const eval::JudgeError& e) {
            fail(item, "verification", "verification_error", e.what());
        }
    } catch (const llm::BackendError& e) {
        throw ForgeAborted("item " + std::to_string(item.index) + ": " + e.what());
    }
}

std::string backend_name(const llm::BackendPtr& b) { return b ? b->describe() : std::string("none"); }

} // namespace

std::vector<std::string> main_candidates(const std::string& text, std::size_t min_chars) {
    std::vector<std::string> out;
    for (auto& p : split_paragraphs(text))
        if (p.size() >= min_chars) out.push_back(std::move(p));
    return out;
}

void ForgeConfig::validate() const {
    if (target_count == 0) throw ConfigError("forge target count must be at least 1");
    if (!(multi_hop_ratio >= 0.0 && multi_hop_ratio <= 1.0)) throw ConfigError("multi_hop_ratio must be in [0, 1]");
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must be in [0, 1)");
    if (annotate.max_steps == 0) throw ConfigError("max_steps must be at least 1");
    if (workers == 0) throw ConfigError("workers must be at least 1");
    if (test_articles && !train_articles) throw ConfigError("a test article set needs a train article set");
    if (train_articles && test_articles) {
        const std::set<std::string> train(train_articles->begin(), train_articles->end());
        for (const auto& id : *test_articles)
            if (train.count(id)) throw ConfigError("train and test article sets overlap on '" + id + "'");
    }
}

json ForgeConfig::to_json() const {
    json j{{"target_count", target_count},
           {"seed", seed},
           {"multi_hop_ratio", multi_hop_ratio},
           {"min_main_chars", min_main_chars},
           {"parse_retries", parse_retries},
           {"judge_retries", judge_retries},
           {"max_steps", annotate.max_steps},
           {"generation_temperature", generation.temperature},
           {"test_fraction", test_fraction},
           {"workers", workers}};
    j["train_articles"] = train_articles ? json(*train_articles) : json(nullptr);
    j["test_articles"] = test_articles ? json(*test_articles) : json(nullptr);
    return j;
}

bool ForgeBackends::order_sensitive() const {
    for (const auto& b : {selector, generator, annotator, judge})
        if (b && b->order_sensitive()) return true;
    return false;
}

std::string_view to_string(Split s) { return s == Split::train ? "train" : "test"; }

json ForgeReport::to_json() const {
    return {{"schema", kForgeReportSchema},
            {"articles", {{"train", articles_train}, {"test", articles_test}}},
            {"attempted", attempted},
            {"generated", generated},
            {"annotated", annotated},
            {"failed", failed},
            {"dropped", dropped},
            {"kept", kept},
            {"kept_train", kept_train},
            {"kept_test", kept_test},
            {"records", records},
            {"warnings", warnings},
            {"reasons", reasons},
            {"question_types", question_types},
            {"complete", complete},
            {"config", config},
            {"config_fingerprint", config_fingerprint}};
}

ForgeResult run_forge(const corpus::Corpus& corpus, const ForgeBackends& backends, const ForgeConfig& config,
                      const ForgeContext& context) {
    config.validate();
    if (!backends.selector || !backends.generator || !backends.annotator || !backends.judge)
        throw ConfigError("forge backends are not configured");
    if (!context.registry) throw ConfigError("no prompt registry");

    std::mt19937_64 rng(config.seed);
    std::vector<std::string> train_ids, test_ids;
    if (config.train_articles) {
        for (const auto* list : {&*config.train_articles, config.test_articles ? &*config.test_articles : nullptr}) {
            if (!list) continue;
            for (const auto& id : *list)
                if (!corpus.contains(id)) throw ConfigError("unknown article '" + id + "' in the forge split");
        }
        train_ids = *config.train_articles;
        if (config.test_articles) test_ids = *config.test_articles;
    } else {
        std::vector<std::string> ids;
        for (const auto& p : corpus.passages()) ids.push_back(p.id);
        std::sort(ids.begin(), ids.end());
        std::shuffle(ids.begin(), ids.end(), rng);
        const auto n_test = static_cast<std::size_t>(std::llround(config.test_fraction * static_cast<double>(ids.size())));
        test_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_test));
        train_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_test), ids.end());
    }
    std::map<std::string, Split> split_of;
    for (const auto& id : train_ids) split_of[id] = Split::train;
    for (const auto& id : test_ids) split_of[id] = Split::test;

    ForgeResult result;
    auto& report = result.report;
    report.articles_train = train_ids.size();
    report.articles_test = test_ids.size();

    // Sampling happens up front on one thread so the plan depends only on the seed.
    std::vector<std::string> order(train_ids);
    order.insert(order.end(), test_ids.begin(), test_ids.end());
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PlannedItem> plan;
    for (const auto& id : order) {
        if (plan.size() == config.target_count) break;
        const auto& article = corpus.at(id);
        const auto all = split_paragraphs(article.text);
        std::vector<std::size_t> eligible;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (all[k].size() >= config.min_main_chars) eligible.push_back(k);
        if (eligible.empty()) {
            ++report.reasons["article_too_short"];
            continue;
        }
        const auto k = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];

        PlannedItem item;
        item.article_id = id;
        item.split = split_of.at(id);
        item.main = corpus::Passage{all.size() == 1 ? id : id + "#" + std::to_string(k), article.title, all[k],
                                    article.links};
        std::set<std::string> seen;
        for (const auto& link : article.links) {
            if (link == id || !seen.insert(link).second) continue;
            const auto* target = corpus.find(link);
            if (!target) {
                item.warnings.push_back("link to unknown article '" + link + "'");
                continue;
            }
            auto it = split_of.find(link);
            if (it == split_of.end() || it->second != item.split) continue;
            item.linked.push_back(*target);
        }
        const bool multi = unit(rng) < config.multi_hop_ratio;
        item.mode = multi && !item.linked.empty() ? HopMode::multi_hop : HopMode::single_hop;
        plan.push_back(std::move(item));
    }

    report.config = config.to_json();
    const bool serial = backends.order_sensitive();
    report.config["workers"] = serial ? 1 : config.workers;
    report.config["backends"] = {{"selector", backend_name(backends.selector)},
                                 {"generator", backend_name(backends.generator)},
                                 {"annotator", backend_name(backends.annotator)},
                                 {"judge", backend_name(backends.judge)}};
    if (!context.run_config.is_null()) report.config["run"] = context.run_config;
    report.config_fingerprint = util::fingerprint(report.config.dump());

    std::vector<ForgeItem> items(plan.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        items[i].index = i;
        items[i].article_id = plan[i].article_id;
        items[i].split = plan[i].split;
    }
    const auto ran = util::parallel_for(
        plan.size(), report.config["workers"].get<std::size_t>(),
        [&](std::size_t i) { run_item(plan[i], items[i], backends, config, *context.registry); }, context.cancel);

    std::vector<std::string> kept_questions;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!ran[i]) {
            report.complete = false;
            continue;
        }
        auto& item = items[i];
        ++report.attempted;
        report.warnings += item.warnings.size();
        if (item.annotation) ++report.generated;
        if (item.annotation && item.annotation->ok()) ++report.annotated;

        if (item.kept()) {
            if (item.split == Split::train) {
                try {
                    for (auto& r : emit_training_records(*item.annotation, *context.registry))
                        result.records.push_back(std::move(r));
                } catch (const std::invalid_argument& e) {
                    fail(item, "export", "export", e.what());
                }
            }
        }
        if (item.kept()) {
            ++report.kept;
            if (item.split == Split::train) {
                ++report.kept_train;
                kept_questions.push_back(item.annotation->question.question);
                result.train.push_back(*item.annotation);
            } else {
                ++report.kept_test;
                result.test.push_back(*item.annotation);
            }
        } else {
            ++report.reasons[*item.reason];
            if (*item.reason == "verification") {
                ++report.dropped;
            } else {
                ++report.failed;
            }
        }
        result.items.push_back(std::move(item));
    }
    report.records = result.records.size();
    report.question_types = question_type_stats(kept_questions);
    return result;
}

void write_forge_outputs(const std::filesystem::path& dir, const ForgeResult& result) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    save_annotations(dir / "annotations.train.jsonl", result.train);
    save_annotations(dir / "annotations.test.jsonl", result.test);
    save_records(dir / "records.train.jsonl", result.records);

    std::vector<eval::QAExample> testset;
    std::vector<corpus::Passage> passages;
    std::set<std::string> passage_ids;
    for (std::size_t i = 0; i < result.test.size(); ++i) {
        const auto& q = result.test[i].question;
        eval::QAExample ex;
        char id[32];
        std::snprintf(id, sizeof id, "test-%05zu", i);
        ex.id = id;
        ex.question = q.question;
        ex.gold_answers = {q.reference_answer};
        std::vector<std::string> gold;
        for (const auto& p : q.pair.sources()) {
            gold.push_back(p.id);
            if (passage_ids.insert(p.id).second) passages.push_back(p);
        }
        ex.gold_passages = std::move(gold);
        testset.push_back(std::move(ex));
    }
    eval::save_dataset(dir / "testset.jsonl", testset);
    {
        std::ofstream out(dir / "testset.passages.jsonl", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "testset.passages.jsonl").string());
        for (const auto& p : passages) out << corpus::passage_to_json(p) << '\n';
    }
    {
        std::ofstream out(dir / "quarantine.jsonl", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "quarantine.jsonl").string());
        for (const auto& item : result.items) {
            if (item.kept()) continue;
            json j{{"schema", "ragloop.quarantine/1"},
                   {"item", item.index},
                   {"article", item.article_id},
                   {"split", std::string(to_string(item.split))},
                   {"stage", item.failed_stage ? json(*item.failed_stage) : json("verification")},
                   {"reason", item.reason.value_or("")},
                   {"message", item.message.value_or("")},
                   {"warnings", item.warnings}};
            j["annotation"] = item.annotation ? to_json(*item.annotation) : json(nullptr);
            out << j.dump() << '\n';
        }
    }
    std::ofstream out(dir / "report.json", std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / "report.json").string());
    out << result.report.to_json().dump(2) << '\n';
}

} // namespace ragloop::forge
