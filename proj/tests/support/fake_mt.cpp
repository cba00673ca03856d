// Scripted translation backend for the adapter contract: reads
// "id<TAB>text" lines and answers each from a key file of
// "id<TAB>translation" lines. Ids missing from the key are echoed back.
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_map>

int main(int argc, char** argv) {
  std::unordered_map<std::string, std::string> key;
  if (argc > 1) {
    std::ifstream in(argv[1]);
    if (!in) {
      std::cerr << "fake_mt: cannot open " << argv[1] << "\n";
      return 1;
    }
    std::string line;
    while (std::getline(in, line)) {
      auto tab = line.find('\t');
      if (tab != std::string::npos) key[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }
  std::string line;
  while (std::getline(std::cin, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string id = line.substr(0, tab);
    auto it = key.find(id);
    std::cout << id << '\t' << (it == key.end() ? line.substr(tab + 1) : it->second) << '\n';
  }
  return 0;
}
