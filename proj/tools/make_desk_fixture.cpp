#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "n360/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the synthetic desk project"};
  std::string dir;
  bool records = false;
  app.add_option("dir", dir, "Output directory")->required();
  app.add_flag("--loudness-records", records, "Write loudness records instead of a WAV file");
  CLI11_PARSE(app, argc, argv);
  n360::fixture::DeskOptions opt;
  opt.loudness_records = records;
  std::cout << n360::fixture::write_desk_fixture(dir, opt).string() << "\n";
  return 0;
}
