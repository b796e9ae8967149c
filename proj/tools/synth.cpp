// Writes a synthetic episode manifest (images, masks, manifest.json).
#include <iostream>

#include "CLI11.hpp"
#include "promptsparse/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic few-shot segmentation manifest"};
  promptsparse::SyntheticOptions opts;
  std::string out;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--episodes", opts.episodes, "Number of episodes")->capture_default_str();
  app.add_option("--shots", opts.shots, "References per episode")->capture_default_str();
  app.add_option("--size", opts.size, "Image side in pixels")->capture_default_str();
  app.add_option("--seed", opts.seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    std::cout << promptsparse::write_synthetic_dataset(out, opts).string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
