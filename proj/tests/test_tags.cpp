#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lvbmt/tags.hpp"
#include "support/testutil.hpp"

using namespace lvbmt;

TEST_CASE("category names round-trip") {
  for (int i = 0; i < kCategoryCount; ++i) {
    auto c = static_cast<Category>(i);
    auto back = category_from_string(category_name(c));
    REQUIRE(back.has_value());
    CHECK(*back == c);
  }
  CHECK_FALSE(category_from_string("interjection").has_value());
}

TEST_CASE("attribute names round-trip") {
  for (int i = 0; i < kAttributeCount; ++i) {
    auto a = static_cast<Attribute>(i);
    auto back = attribute_from_string(attribute_name(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
}

TEST_CASE("tag inventory is internally consistent") {
  const auto& inv = tag_inventory();
  REQUIRE(!inv.empty());
  for (size_t i = 0; i < inv.size(); ++i) {
    auto t = tag_from_string(inv[i].name);
    REQUIRE(t.has_value());
    CHECK(*t == static_cast<Tag>(i));
    CHECK(tag_name(*t) == inv[i].name);
    CHECK(tag_attribute(*t) == inv[i].attribute);
  }
  CHECK_FALSE(tag_from_string("dual").has_value());
}

TEST_CASE("shipped tagset file matches the built-in inventory") {
  std::ifstream is(testutil::data_path("tagset.txt"));
  REQUIRE(is);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "version " + std::to_string(kTagsetVersion));
  const auto& inv = tag_inventory();
  size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, attr;
    REQUIRE((ls >> name >> attr));
    REQUIRE(row < inv.size());
    CHECK(name == inv[row].name);
    CHECK(attr == attribute_name(inv[row].attribute));
    ++row;
  }
  CHECK(row == inv.size());
}

TEST_CASE("parse_tags and format_tags round-trip") {
  auto tags = parse_tags("m,sg");
  REQUIRE(tags.has_value());
  CHECK(tags->size() == 2);
  CHECK(format_tags(*tags) == "m,sg");

  auto empty = parse_tags("-");
  REQUIRE(empty.has_value());
  CHECK(empty->empty());
  CHECK(format_tags(*empty) == "-");

  std::string bad;
  CHECK_FALSE(parse_tags("m,bogus", &bad).has_value());
  CHECK(bad == "bogus");
}

TEST_CASE("attribute tag helpers") {
  TagList tags = *parse_tags("m,sg");
  auto pl = *tag_from_string("pl");
  set_attribute_tag(tags, Attribute::Number, pl);
  CHECK(format_tags(tags) == "m,pl");
  auto f = *tag_from_string("f");
  set_attribute_tag(tags, Attribute::Gender, f);
  CHECK(format_tags(tags) == "f,pl");

  auto got = find_attribute_tag(tags, Attribute::Number);
  REQUIRE(got.has_value());
  CHECK(tag_name(*got) == "pl");
  CHECK_FALSE(find_attribute_tag(tags, Attribute::Tense).has_value());

  // Appends when the attribute is absent.
  TagList bare;
  set_attribute_tag(bare, Attribute::Gender, f);
  CHECK(format_tags(bare) == "f");
}

TEST_CASE("tags_subset") {
  TagList sub = *parse_tags("m,sg");
  TagList super = *parse_tags("m,sg,p3");
  CHECK(tags_subset(sub, super));
  CHECK_FALSE(tags_subset(super, sub));
  CHECK(tags_subset({}, sub));
}
