#include "support/support.hpp"

#include "ragloop/llm/chat.hpp"
#include "ragloop/llm/scripted.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <thread>

using namespace ragloop;
using namespace ragloop::llm;

TEST_CASE("conversation validation") {
    CHECK_NOTHROW(validate_conversation({user_message("q")}));
    CHECK_NOTHROW(validate_conversation({system_message("s"), user_message("q"), assistant_message("a"),
                                         user_message("q2")}));
    CHECK_THROWS_AS(validate_conversation({}), InvalidConversation);
    CHECK_THROWS_AS(validate_conversation({system_message("s")}), InvalidConversation);
    CHECK_THROWS_AS(validate_conversation({assistant_message("a")}), InvalidConversation);
    CHECK_THROWS_AS(validate_conversation({user_message("q"), user_message("q")}), InvalidConversation);
    CHECK_THROWS_AS(validate_conversation({user_message("  ")}), InvalidConversation);
    CHECK_THROWS_AS(validate_conversation({user_message("q"), system_message("s")}), InvalidConversation);
}

TEST_CASE("message json round trip") {
    std::vector<ChatMessage> msgs{system_message("s"), user_message("u"), assistant_message("a")};
    CHECK(messages_from_json(to_json(msgs)) == msgs);
    CHECK(parse_role("assistant") == Role::assistant);
    CHECK_THROWS(parse_role("tool"));
}

TEST_CASE("scripted backend replays in order and records requests") {
    auto b = make_scripted(std::vector<std::string>{"one", "two"});
    CHECK(b->order_sensitive());
    GenerationParams p;
    p.temperature = 0.3;
    CHECK(b->chat({user_message("first")}, p) == "one");
    CHECK(b->chat({user_message("second")}) == "two");
    CHECK_THROWS_AS(b->chat({user_message("third")}), ScriptExhausted);
    const auto t = b->transcript();
    REQUIRE(t.size() == 2);
    CHECK(t[0].messages[0].content == "first");
    CHECK(t[0].params.temperature == 0.3);
    CHECK(t[1].response == "two");
    CHECK(b->remaining() == 0);
    CHECK(transcript_from_json(transcript_to_json(t)) == t);
}

TEST_CASE("scripted expectation mismatch does not consume the entry") {
    auto b = make_scripted({ScriptEntry{"reply", std::string("needle")}});
    CHECK_THROWS_AS(b->chat({user_message("haystack only")}), ScriptMismatch);
    CHECK(b->remaining() == 1);
    CHECK(b->chat({user_message("a needle here")}) == "reply");
}

TEST_CASE("invalid conversations never reach the script") {
    auto b = make_scripted(std::vector<std::string>{"x"});
    CHECK_THROWS_AS(b->chat({assistant_message("a")}), InvalidConversation);
    CHECK(b->remaining() == 1);
}

TEST_CASE("script parsing accepts both layouts") {
    auto arr = parse_script(nlohmann::json::parse(R"(["a", {"response": "b", "expect": "x"}])"));
    REQUIRE(arr.size() == 2);
    CHECK(arr[1].expect == std::optional<std::string>("x"));
    auto obj = parse_script(nlohmann::json::parse(R"({"responses": ["a"]})"));
    CHECK(obj.size() == 1);
    CHECK_THROWS(parse_script(nlohmann::json::parse(R"({"other": 1})")));
    CHECK_THROWS_AS(make_scripted(std::vector<std::string>{}), std::invalid_argument);
}

TEST_CASE("bundled scripts load") {
    CHECK(load_script(testing::data_dir() / "scripts/one_search.json").size() == 4);
    CHECK(load_script(testing::data_dir() / "scripts/two_search.json").size() == 6);
}

namespace {

class SlowBackend final : public ChatBackend {
public:
    explicit SlowBackend(std::size_t cap) : ChatBackend(cap) {}
    std::string describe() const override { return "slow"; }
    std::atomic<int> active{0};
    std::atomic<int> peak{0};

protected:
    std::string complete(const std::vector<ChatMessage>&, const GenerationParams&) override {
        const int now = ++active;
        int prev = peak.load();
        while (now > prev && !peak.compare_exchange_weak(prev, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        --active;
        return "ok";
    }
};

} // namespace

TEST_CASE("in-flight cap bounds concurrent requests") {
    SlowBackend b(2);
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i) threads.emplace_back([&] { b.chat({user_message("q")}); });
    for (auto& t : threads) t.join();
    CHECK(b.peak.load() <= 2);
    CHECK(b.peak.load() >= 1);
}

TEST_CASE("redaction masks every occurrence") {
    CHECK(redact("key sk-123 and sk-123", "sk-123") == "key [REDACTED] and [REDACTED]");
    CHECK(redact("nothing", "") == "nothing");
}
