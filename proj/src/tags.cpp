#include "lvbmt/tags.hpp"

namespace lvbmt {

namespace {

struct CategoryName {
  std::string_view name;
  Category cat;
};

constexpr CategoryName kCategories[] = {
    {"noun", Category::Noun},           {"adjective", Category::Adjective},
    {"adverb", Category::Adverb},       {"pronoun", Category::Pronoun},
    {"verb", Category::Verb},           {"determiner", Category::Determiner},
    {"preposition", Category::Preposition}, {"propernoun", Category::ProperNoun},
    {"phrase", Category::Phrase},
};

constexpr std::string_view kAttributeNames[kAttributeCount] = {
    "gender", "number", "person", "tense", "mood", "clitic"};

}  // namespace

std::optional<Category> category_from_string(std::string_view s) {
  for (const auto& c : kCategories)
    if (c.name == s) return c.cat;
  return std::nullopt;
}

std::string_view category_name(Category c) {
  return kCategories[static_cast<size_t>(c)].name;
}

std::optional<Attribute> attribute_from_string(std::string_view s) {
  for (int i = 0; i < kAttributeCount; ++i)
    if (kAttributeNames[i] == s) return static_cast<Attribute>(i);
  return std::nullopt;
}

std::string_view attribute_name(Attribute a) {
  return kAttributeNames[static_cast<size_t>(a)];
}

const std::vector<TagInfo>& tag_inventory() {
  static const std::vector<TagInfo> kTags = {
      // gender
      {"m", Attribute::Gender},
      {"f", Attribute::Gender},
      {"mf", Attribute::Gender},
      // number
      {"sg", Attribute::Number},
      {"pl", Attribute::Number},
      {"sp", Attribute::Number},
      // person
      {"p1", Attribute::Person},
      {"p2", Attribute::Person},
      {"p3", Attribute::Person},
      // tense
      {"pres", Attribute::Tense},
      {"impf", Attribute::Tense},
      {"perf", Attribute::Tense},
      {"fut", Attribute::Tense},
      {"cond", Attribute::Tense},
      // mood
      {"ind", Attribute::Mood},
      {"subj", Attribute::Mood},
      {"imp", Attribute::Mood},
      {"inf", Attribute::Mood},
      {"ger", Attribute::Mood},
      {"part", Attribute::Mood},
      // clitic markers
      {"refl", Attribute::Clitic},
      {"acc", Attribute::Clitic},
      {"dat", Attribute::Clitic},
  };
  return kTags;
}

std::optional<Tag> tag_from_string(std::string_view s) {
  const auto& inv = tag_inventory();
  for (size_t i = 0; i < inv.size(); ++i)
    if (inv[i].name == s) return static_cast<Tag>(i);
  return std::nullopt;
}

std::string_view tag_name(Tag t) { return tag_inventory()[t].name; }

Attribute tag_attribute(Tag t) { return tag_inventory()[t].attribute; }

bool tags_subset(const TagList& sub, const TagList& super) {
  for (Tag t : sub) {
    bool found = false;
    for (Tag u : super)
      if (t == u) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

void set_attribute_tag(TagList& tags, Attribute attr, Tag value) {
  for (Tag& t : tags)
    if (tag_attribute(t) == attr) {
      t = value;
      return;
    }
  tags.push_back(value);
}

std::optional<Tag> find_attribute_tag(const TagList& tags, Attribute attr) {
  for (Tag t : tags)
    if (tag_attribute(t) == attr) return t;
  return std::nullopt;
}

std::string format_tags(const TagList& tags) {
  if (tags.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (i) out.push_back(',');
    out += tag_name(tags[i]);
  }
  return out;
}

std::optional<TagList> parse_tags(std::string_view s, std::string* bad) {
  TagList tags;
  if (s == "-" || s.empty()) return tags;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string_view piece =
        s.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                      : comma - pos);
    auto tag = tag_from_string(piece);
    if (!tag) {
      if (bad) *bad = std::string(piece);
      return std::nullopt;
    }
    tags.push_back(*tag);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return tags;
}

}  // namespace lvbmt
