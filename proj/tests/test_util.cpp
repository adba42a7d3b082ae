#include <doctest.h>

#include <filesystem>

#include "signforge/util/csv.hpp"
#include "signforge/util/error.hpp"
#include "signforge/util/parallel.hpp"
#include "signforge/util/sha256.hpp"

using namespace signforge;

TEST_CASE("sha256 matches FIPS 180-4 vectors") {
  CHECK(util::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(util::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(util::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // incremental updates agree with one-shot
  util::Sha256 h;
  h.update("ab");
  h.update("c");
  CHECK(util::digest_hex(h.digest()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv round trip and error reporting") {
  util::CsvTable t;
  t.header = {"epsilon", "accuracy"};
  t.rows = {{"0.010000", "0.950000"}, {"0.020000", "0.900000"}};
  auto text = t.to_string();
  auto back = util::parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("accuracy") == 1);
  CHECK_THROWS_AS(back.column("missing"), DataError);

  // ragged row names the 1-based line number
  try {
    util::parse_csv("a,b\n1,2\n3\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("format_double is deterministic fixed point") {
  CHECK(util::format_double(0.5) == "0.500000");
  CHECK(util::format_double(1.0 / 3.0, 4) == "0.3333");
  CHECK(util::format_double(-2.0, 2) == "-2.00");
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  util::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
