// Regenerates the scenario corpus files from the built-in definitions.
//   make_corpus [output_dir]

#include <cstdio>
#include <filesystem>

#include "cri/corpus.hpp"
#include "cri/scenario_io.hpp"

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "scenarios";
    std::filesystem::create_directories(out_dir);
    for (const auto& sc : cri::corpus::all()) {
        const std::string path = out_dir + "/" + sc.name + ".scn";
        cri::save_scenario(sc, path);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}
