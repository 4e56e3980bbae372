#ifndef LVBMT_TAGS_HPP
#define LVBMT_TAGS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lvbmt {

// Closed lexical category set of the dictionary format.
enum class Category : uint8_t {
  Noun,
  Adjective,
  Adverb,
  Pronoun,
  Verb,
  Determiner,
  Preposition,
  ProperNoun,
  Phrase,
};

constexpr int kCategoryCount = 9;

std::optional<Category> category_from_string(std::string_view s);
std::string_view category_name(Category c);

// Morphological attribute classes. SET rule actions address tags by
// attribute, so every tag belongs to exactly one attribute.
enum class Attribute : uint8_t { Gender, Number, Person, Tense, Mood, Clitic };

constexpr int kAttributeCount = 6;

std::optional<Attribute> attribute_from_string(std::string_view s);
std::string_view attribute_name(Attribute a);

// The tag inventory is versioned; data/tagset.txt documents the same table
// and a test keeps the two in sync.
constexpr int kTagsetVersion = 1;

using Tag = uint8_t;

struct TagInfo {
  std::string_view name;
  Attribute attribute;
};

const std::vector<TagInfo>& tag_inventory();
std::optional<Tag> tag_from_string(std::string_view s);
std::string_view tag_name(Tag t);
Attribute tag_attribute(Tag t);

using TagList = std::vector<Tag>;

bool tags_subset(const TagList& sub, const TagList& super);
// Replaces the tag of `attr` (if any) with `value`; appends otherwise.
void set_attribute_tag(TagList& tags, Attribute attr, Tag value);
std::optional<Tag> find_attribute_tag(const TagList& tags, Attribute attr);

std::string format_tags(const TagList& tags);  // "m,sg" ("-" when empty)
// Parses "m,sg" (or "-"); returns std::nullopt on any unknown tag and
// reports the offending name through `bad`.
std::optional<TagList> parse_tags(std::string_view s, std::string* bad = nullptr);

}  // namespace lvbmt

#endif
