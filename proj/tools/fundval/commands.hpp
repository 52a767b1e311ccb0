#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fundval::cli {

enum ExitCode : int { kOk = 0, kFatal = 1, kPartial = 2 };

struct GlobalOptions {
    std::uint64_t seed = 1;
    bool seed_given = false;
    unsigned threads = 0;
    std::string config;
};

struct VesselnessArgs {
    std::string input;
    std::string output;
    std::string scales = "1,2,3";
    bool no_normalize = false;
};

struct EdgeLossArgs {
    std::string a;
    std::string b;
    std::string scales = "1,2,3";
    bool no_normalize = false;
};

struct MsssimArgs {
    std::string pairs;
    int levels = 5;
    bool per_pair = false;
};

struct FidArgs {
    std::string a;
    std::string b;
};

struct MmdArgs {
    std::string a;
    std::string b;
    std::string a_dir;
    std::string b_dir;
    std::string bandwidth = "median";
    std::string estimator = "unbiased";
};

struct QuantizeArgs {
    std::string latents;
    std::string codebook;
    double beta = 0.25;
    std::string route = "direct";
    std::string output;
};

struct CodebookFitArgs {
    std::string features;
    int k = 512;
    int iters = 50;
    std::string output;
};

struct MorphArgs {
    std::string vessel;
    std::string artery;
    std::string vein;
    std::string disc;
    std::string cup;
    std::string manifest;
    std::string output;
};

struct PermtestArgs {
    std::string real;
    std::string synth;
    int permutations = 10000;
    double threshold = 0.05;
    std::string name = "synthetic";
    std::string output;
};

struct TstrArgs {
    std::string train;
    std::string train_targets;
    std::string test;
    std::string test_targets;
    std::string targets;
    int repeats = 5;
    double lambda = 1.0;
    std::string output;
};

struct RunArgs {
    std::string output;
    std::string output_dir;
    std::string style = "table";
};

struct RenderArgs {
    std::string input;
    std::string style = "table";
};

struct PhantomArgs {
    std::string output;
    int count = 16;
    int size = 256;
};

std::vector<double> parse_scale_list(const std::string& text);

int cmd_vesselness(const GlobalOptions& g, const VesselnessArgs& a);
int cmd_edge_loss(const GlobalOptions& g, const EdgeLossArgs& a);
int cmd_msssim(const GlobalOptions& g, const MsssimArgs& a);
int cmd_fid(const GlobalOptions& g, const FidArgs& a);
int cmd_mmd(const GlobalOptions& g, const MmdArgs& a);
int cmd_quantize(const GlobalOptions& g, const QuantizeArgs& a);
int cmd_codebook_fit(const GlobalOptions& g, const CodebookFitArgs& a);
int cmd_morph(const GlobalOptions& g, const MorphArgs& a);
int cmd_permtest(const GlobalOptions& g, const PermtestArgs& a);
int cmd_tstr(const GlobalOptions& g, const TstrArgs& a);
int cmd_run(const GlobalOptions& g, const RunArgs& a);
int cmd_render(const GlobalOptions& g, const RenderArgs& a);
int cmd_phantom(const GlobalOptions& g, const PhantomArgs& a);

}  // namespace fundval::cli
