#include "fibdistill/wordfile.hpp"

#include <fstream>
#include <sstream>

namespace fibdistill {

std::string format_word(const BraidWord& word) {
  check_word(word);
  std::ostringstream out;
  out << "strands " << word.strandCount << '\n';
  for (const Crossing& c : word.crossings)
    out << (c.sign > 0 ? 's' : 'S') << c.index << '\n';
  return out.str();
}

BraidWord parse_word(const std::string& text, const std::string& originName) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  BraidWord word;
  bool haveHeader = false;
  auto fail = [&](const std::string& what) {
    throw Error(originName + ":" + std::to_string(lineNo) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!haveHeader) {
      std::istringstream head(line);
      std::string tag;
      head >> tag >> word.strandCount;
      if (tag != "strands" || head.fail() || word.strandCount < 1)
        fail("expected header 'strands <N>'");
      std::string rest;
      if (head >> rest) fail("trailing content after strand count");
      haveHeader = true;
      continue;
    }
    if (line[0] != 's' && line[0] != 'S')
      fail("expected crossing 's<i>' or 'S<i>'");
    int index = 0;
    std::size_t pos = 1;
    try {
      index = std::stoi(line.substr(1), &pos);
    } catch (const std::exception&) {
      fail("malformed crossing index");
    }
    if (pos + 1 != line.size()) fail("trailing content after crossing");
    if (index < 1 || index >= word.strandCount)
      fail("crossing index " + std::to_string(index) + " out of range");
    word.push(index, line[0] == 's' ? 1 : -1);
  }
  if (!haveHeader) throw Error(originName + ": empty braid word file");
  return word;
}

BraidWord read_word_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open braid word file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_word(buf.str(), path.string());
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_word_file(const std::filesystem::path& path, const BraidWord& word) {
  atomic_write_file(path, format_word(word));
}

}  // namespace fibdistill
