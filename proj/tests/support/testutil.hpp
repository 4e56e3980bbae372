#ifndef LVBMT_TESTS_TESTUTIL_HPP
#define LVBMT_TESTS_TESTUTIL_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lvbmt/backend.hpp"
#include "lvbmt/dictionary.hpp"

namespace testutil {

inline std::string data_path(const std::string& rel) {
  return std::string(LVBMT_DATA_DIR) + "/" + rel;
}

inline std::string golden_path(const std::string& rel) {
  return std::string(LVBMT_GOLDEN_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("testutil: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("testutil: cannot write " + path);
  os << content;
}

// Fresh directory under the system temp root; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lvbmt-test-" + tag + "-" + std::to_string(++counter));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

// Both-language micro dictionary used where the shipped fixture would be
// overkill. Ladin entries come first so Ladin analyses win on homographs.
inline const char* kMiniParadigms = R"(P nm noun
F - m,sg
F i m,pl
P nf noun
F a f,sg
F es f,pl
P adj4 adjective
F - m,sg
F a f,sg
F s m,pl
F es f,pl
P adv adverb
F - -
P it-no noun
F o m,sg
F i m,pl
P it-na noun
F a f,sg
F e f,pl
P it-adjo adjective
F o m,sg
F a f,sg
F i m,pl
F e f,pl
)";

inline const char* kMiniLemmas = R"(L liber - nm
L ciasa cias nf
L bel - adj4
L pa - adv
L a_man_derta - adv
L libro libr it-no
L casa cas it-na
L bello bell it-adjo
L a_destra - adv
)";

inline const char* kMiniBilingual = R"(B liber noun libro noun
B ciasa noun casa noun
B bel adjective bello adjective
B a_man_derta adverb a_destra adverb
)";

inline lvbmt::DictionaryPtr mini_dict() {
  return lvbmt::compile_dictionary_text(kMiniParadigms, kMiniLemmas,
                                        kMiniBilingual, "lvb", "ita");
}

// Test backend with a programmable failure schedule.
class ScriptedBackend : public lvbmt::Backend {
 public:
  explicit ScriptedBackend(std::string id = "scripted") : id_(std::move(id)) {}

  const std::string& id() const override { return id_; }

  std::vector<std::string> translate_batch(
      const std::vector<std::string>& sources, lvbmt::Direction) override {
    ++calls;
    batch_sizes.push_back(sources.size());
    if (fail_next > 0) {
      --fail_next;
      throw lvbmt::BackendError("scripted transport failure", /*retryable=*/true);
    }
    if (fail_sentence >= 0)
      for (const auto& s : sources)
        if (s == fail_on)
          throw lvbmt::BackendError("scripted poison sentence",
                                    /*retryable=*/false);
    if (short_output) {
      std::vector<std::string> out;
      for (size_t i = 0; i + 1 < sources.size(); ++i)
        out.push_back(prefix + sources[i]);
      return out;
    }
    std::vector<std::string> out;
    out.reserve(sources.size());
    for (const auto& s : sources) out.push_back(prefix + s);
    return out;
  }

  std::string prefix = "T:";
  int fail_next = 0;          // throw retryable errors for the next N calls
  int fail_sentence = -1;     // enable poison-sentence mode when >= 0
  std::string fail_on;        // sentence that triggers a non-retryable error
  bool short_output = false;  // drop the last output of every batch
  int calls = 0;
  std::vector<size_t> batch_sizes;

 private:
  std::string id_;
};

}  // namespace testutil

#endif
