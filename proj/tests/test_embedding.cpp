/*
 * Copyright 2026 The WAT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "support/test_support.hpp"
#include "wat/alliance.hpp"
#include "wat/embed_server.hpp"
#include "wat/embedding.hpp"
#include "wat/error.hpp"
#include "wat/text.hpp"

namespace wat {
namespace {

using nlohmann::json;

bool all_zero(const EmbeddingVector& v) {
  return std::all_of(v.values.begin(), v.values.end(), [](double x) { return x == 0.0; });
}

double norm(const EmbeddingVector& v) {
  double s = 0;
  for (double x : v.values) s += x * x;
  return std::sqrt(s);
}

TEST(Tokenize, LowercasesStripsPunctuationSplitsWhitespace) {
  EXPECT_EQ(tokenize("Hello, World!  It's\tfine."),
            (std::vector<std::string>{"hello", "world", "its", "fine"}));
  EXPECT_TRUE(tokenize("  ...  ").empty());
  EXPECT_EQ(trim("  a b \n"), "a b");
}

TEST(HashProvider, EmptyTextIsZeroVector) {
  HashEmbeddingProvider p(64);
  for (const char* t : {"", "   ", "\t\n"}) {
    const auto v = p.embed(t);
    EXPECT_EQ(v.dim(), 64u);
    EXPECT_TRUE(all_zero(v));
  }
  EXPECT_EQ(p.backend_calls(), 0u);
}

TEST(HashProvider, PunctuationOnlyTextIsZeroVector) {
  HashEmbeddingProvider p(64);
  EXPECT_TRUE(all_zero(p.embed("?!...")));
}

TEST(HashProvider, DeterministicAndOrderInvariant) {
  HashEmbeddingProvider p(64);
  EXPECT_EQ(p.embed("some text here").values, p.embed("some text here").values);
  EXPECT_EQ(p.embed("alpha beta").values, p.embed("beta alpha").values);
  HashEmbeddingProvider q(64);
  EXPECT_EQ(p.embed("alpha beta").values, q.embed("alpha beta").values);
}

TEST(HashProvider, MatchesIndependentOracle) {
  std::mt19937_64 rng(1);
  const std::vector<std::string> words = {"I",    "feel", "anxious", "today", "we", "agree",
                                          "goal", "Bond", "trust",   "work,", "!",  "ok."};
  for (std::size_t d : {8u, 64u, 128u}) {
    for (std::uint64_t seed : {0ull, 7ull}) {
      HashEmbeddingProvider p(d, seed);
      for (int trial = 0; trial < 100; ++trial) {
        std::string text;
        for (std::size_t k = 0, n = rng() % 9; k < n; ++k) text += words[rng() % words.size()] + " ";
        const auto got = p.hash_text(text);
        const auto want = test::oracle_hash_embed(text, d, seed);
        ASSERT_EQ(got.values.size(), d);
        for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(got.values[i], want[i], 1e-15);
      }
    }
  }
}

TEST(HashProvider, UnitNormUnlessZero) {
  HashEmbeddingProvider p(64);
  EXPECT_NEAR(norm(p.embed("a b c d e")), 1.0, 1e-12);
  EXPECT_NEAR(norm(p.embed("repeat repeat repeat")), 1.0, 1e-12);
}

TEST(HashProvider, DisjointVocabularyIsOrthogonalAndSameMultisetIsParallel) {
  HashEmbeddingProvider p(64);
  // Tokens chosen to land in distinct buckets at d = 64.
  const auto a = p.embed("therapist session");
  const auto b = p.embed("weather outside");
  std::set<std::size_t> ba, bb;
  for (std::size_t i = 0; i < 64; ++i) {
    if (a.values[i] != 0) ba.insert(i);
    if (b.values[i] != 0) bb.insert(i);
  }
  bool overlap = false;
  for (auto i : ba) overlap |= bb.count(i) > 0;
  if (!overlap) {
    EXPECT_EQ(cosine(a, b), 0.0);
  }
  EXPECT_NEAR(cosine(p.embed("x y y z"), p.embed("Y z, x y")), 1.0, 1e-12);
}

TEST(HashProvider, SeedChangesVectors) {
  HashEmbeddingProvider a(64, 0), b(64, 1);
  EXPECT_NE(a.embed("hello world").values, b.embed("hello world").values);
}

TEST(EmbedBatch, ElementwiseEqualToEmbed) {
  HashEmbeddingProvider p(32);
  EXPECT_TRUE(p.embed_batch({}).empty());
  const std::vector<std::string> texts = {"a", "a", "", "b c", " b c "};
  const auto out = p.embed_batch(texts);
  ASSERT_EQ(out.size(), texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(out[i].values, p.embed(texts[i]).values);
  EXPECT_EQ(out[0].values, out[1].values);
}

TEST(EmbedBatch, OneBackendCallPerBatch) {
  HashEmbeddingProvider p(16);
  p.embed_batch(std::vector<std::string>{"a", "b", "c"});
  EXPECT_EQ(p.backend_calls(), 1u);
}

TEST(Cache, TransparentAndAvoidsRecompute) {
  HashEmbeddingProvider cached(64, 3, 8), plain(64, 3, 0);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const std::string t = "tok" + std::to_string(rng() % 20) + " w" + std::to_string(rng() % 3);
    EXPECT_EQ(cached.embed(t).values, plain.embed(t).values);
  }
  EXPECT_LT(cached.backend_calls(), plain.backend_calls());
  const auto before = cached.backend_calls();
  cached.embed("tok1 w1");
  cached.embed("tok1 w1");
  EXPECT_LE(cached.backend_calls(), before + 1);
}

TEST(Cache, ConcurrentCallsAgreeWithSerialResults) {
  HashEmbeddingProvider shared(64, 0, 16);
  HashEmbeddingProvider ref(64);
  std::vector<std::string> texts;
  for (int i = 0; i < 64; ++i) texts.push_back("text " + std::to_string(i % 24));
  std::atomic<int> mismatches{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int rep = 0; rep < 50; ++rep) {
        const auto& s = texts[(rep * 7 + t * 13) % texts.size()];
        if (shared.embed(s).values != ref.hash_text(s).values) ++mismatches;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(ProviderSpec, Parses) {
  EXPECT_EQ(parse_provider_spec("hash").kind, ProviderKind::hash);
  EXPECT_EQ(parse_provider_spec("hash").dim, 64u);
  EXPECT_EQ(parse_provider_spec("hash:128").dim, 128u);
  EXPECT_EQ(parse_provider_spec("hash", 32).dim, 32u);
  const auto f = parse_provider_spec("file:/tmp/v.jsonl");
  EXPECT_EQ(f.kind, ProviderKind::file);
  EXPECT_EQ(f.path, "/tmp/v.jsonl");
  const auto r = parse_provider_spec("remote:http://127.0.0.1:9");
  EXPECT_EQ(r.kind, ProviderKind::remote);
  EXPECT_EQ(r.endpoint, "http://127.0.0.1:9");
  for (const char* bad : {"hash:0", "hash:x", "file", "remote", "bert"}) {
    EXPECT_THROW(parse_provider_spec(bad), ConfigError) << bad;
  }
}

TEST(FileProvider, LooksUpVectorsByText) {
  test::TempDir dir;
  HashEmbeddingProvider h(8);
  const std::vector<std::string> texts = {"alpha", "beta gamma"};
  write_embedding_file(dir / "v.jsonl", texts, h.embed_batch(texts));
  FileEmbeddingProvider f(dir / "v.jsonl");
  EXPECT_EQ(f.dim(), 8u);
  EXPECT_EQ(f.entries(), 2u);
  EXPECT_EQ(f.embed(" alpha ").values, h.embed("alpha").values);
  EXPECT_TRUE(all_zero(f.embed("")));
  try {
    f.embed_batch(std::vector<std::string>{"alpha", "delta"});
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown text: 'delta'"), std::string::npos) << e.what();
  }
}

TEST(FileProvider, FirstRecordFixesDimension) {
  test::TempDir dir;
  {
    std::ofstream f(dir / "v.jsonl");
    f << R"({"text":"a","vector":[1,0,0]})" "\n" R"({"text":"b","vector":[1,0]})" "\n";
  }
  EXPECT_THROW(FileEmbeddingProvider(dir / "v.jsonl"), Error);
  {
    std::ofstream f(dir / "w.jsonl");
    f << "{bad json\n";
  }
  EXPECT_THROW(FileEmbeddingProvider(dir / "w.jsonl"), Error);
  EXPECT_THROW(FileEmbeddingProvider(dir / "missing.jsonl"), ProviderError);
}

class RemoteTest : public ::testing::Test {
 protected:
  void SetUp() override {
    backend_ = std::make_shared<HashEmbeddingProvider>(48, 0, 0);
    server_ = std::make_unique<EmbedServer>(backend_);
    port_ = server_->start("127.0.0.1", 0);
  }
  void TearDown() override { server_->stop(); }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::shared_ptr<HashEmbeddingProvider> backend_;
  std::unique_ptr<EmbedServer> server_;
  int port_ = 0;
};

TEST_F(RemoteTest, DiscoversDimensionAndMatchesBackend) {
  RemoteEmbeddingProvider r(endpoint());
  EXPECT_EQ(r.dim(), 48u);
  const std::vector<std::string> batch = {"one", "two words", "three, words here"};
  const auto before = backend_->backend_calls();
  const auto out = r.embed_batch(batch);
  EXPECT_EQ(backend_->backend_calls(), before + 1);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i].dim(), 48u);
    EXPECT_EQ(out[i].values, backend_->hash_text(batch[i]).values);
  }
  EXPECT_EQ(r.backend_calls(), 1u);
}

TEST_F(RemoteTest, ProtocolResponses) {
  httplib::Client c(endpoint());
  auto ok = c.Post("/embed", R"({"texts":["a"]})", "application/json");
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  const json j = json::parse(ok->body);
  EXPECT_EQ(j["dim"], 48);
  EXPECT_EQ(j["embeddings"].size(), 1u);
  EXPECT_EQ(j["embeddings"][0].size(), 48u);

  auto empty = c.Post("/embed", R"({"texts":[]})", "application/json");
  ASSERT_TRUE(empty);
  EXPECT_EQ(json::parse(empty->body), json::parse(R"({"dim":48,"embeddings":[]})"));

  for (const char* bad : {"{nope", "[]", R"({"texts":"a"})", R"({"texts":[1]})", R"({})"}) {
    auto r = c.Post("/embed", bad, "application/json");
    ASSERT_TRUE(r);
    EXPECT_GE(r->status, 400) << bad;
    EXPECT_LT(r->status, 500) << bad;
  }
}

TEST_F(RemoteTest, SecondServerOnSamePortFails) {
  EmbedServer other(backend_);
  EXPECT_THROW(other.start("127.0.0.1", port_), Error);
}

TEST(RemoteProvider, TransportErrorSurfaces) {
  // Port 9 (discard) is not served in the sandbox.
  EXPECT_THROW(RemoteEmbeddingProvider("http://127.0.0.1:9"), ProviderError);
}

// Serves canned bodies to exercise client-side validation.
class FakeServer {
 public:
  explicit FakeServer(std::function<void(const httplib::Request&, httplib::Response&)> h) {
    server_.Post("/embed", std::move(h));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST(RemoteProvider, MalformedResponsesNameTheTextIndex) {
  FakeServer fake([](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    json out{{"dim", 2}, {"embeddings", json::array()}};
    for (std::size_t i = 0; i < body["texts"].size(); ++i) {
      out["embeddings"].push_back(i == 1 ? json::array({1.0}) : json::array({1.0, 0.0}));
    }
    res.set_content(out.dump(), "application/json");
  });
  RemoteEmbeddingProvider r(fake.endpoint());
  EXPECT_EQ(r.dim(), 2u);
  try {
    r.embed_batch(std::vector<std::string>{"a", "b", "c"});
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_NE(std::string(e.what()).find("text index 1"), std::string::npos) << e.what();
  }
}

TEST(RemoteProvider, NonOkStatusAndBadBodiesFail) {
  FakeServer status([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  EXPECT_THROW(RemoteEmbeddingProvider(status.endpoint()), ProviderError);

  FakeServer garbage([](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  EXPECT_THROW(RemoteEmbeddingProvider(garbage.endpoint()), ProviderError);

  FakeServer count([](const httplib::Request& req, httplib::Response& res) {
    const bool empty = json::parse(req.body)["texts"].empty();
    res.set_content(empty ? R"({"dim":2,"embeddings":[]})" : R"({"dim":2,"embeddings":[]})",
                    "application/json");
  });
  RemoteEmbeddingProvider r(count.endpoint());
  EXPECT_THROW(r.embed("x"), ProviderError);
}

TEST(MakeProvider, BuildsEachKind) {
  ProviderConfig c;
  c.dim = 12;
  auto h = make_provider(c);
  EXPECT_EQ(h->dim(), 12u);
  EXPECT_EQ(h->label(), "hash12");
  EXPECT_EQ(HashEmbeddingProvider(64).label(), "hash");
}

}  // namespace
}  // namespace wat
