#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace liouville::cli {

enum ExitCode : int {
    kPass = 0,
    kNumericalFailure = 1,
    kInputError = 2,
    kHypothesisNotMet = 3,
};

enum class Format { text, machine };

/// Ordered report. Text mode prints "label: value" lines under section
/// headings; machine mode prints "section.key=value" lines with stable keys.
class Report {
public:
    void section(std::string name, std::string title);
    void field(const std::string& key, std::string value, std::string label = {});
    void note(std::string line);  // text mode only
    void print(std::ostream& out, Format format) const;

private:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        std::string label;
        bool heading = false;
        bool note = false;
    };
    std::vector<Entry> entries_;
    std::string current_;
};

int sl2_check(int n, Report& rep);
int cohomology(const std::string& file, bool betti, bool el, bool harmonic, Report& rep);
int classify(const std::string& file, int k, Report& rep);
int from_two_form(const std::string& file, Report& rep);

struct FlowOptions {
    std::string file;
    long double t = 1;
    long double dt = 1e-3L;
    std::string chain_file;
    int l = 0;  // 0: taken from the chain
    int k = 0;  // 0: k = l
};
int flow(const FlowOptions& opt, Report& rep);
int chain(const std::string& file, int l, Report& rep);
int paper_verify(const std::string& data_dir, Report& rep);

/// Full command line front-end; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string format_real(long double v);

} // namespace liouville::cli
