// Command-line front end: `analyze` and `compare`.
#include "irenergy/driver/driver.hpp"
#include "irenergy/support/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace irenergy;

int main(int argc, char** argv) {
  CLI::App app{"Static energy analysis of SSA programs"};
  app.require_subcommand(1);

  const std::map<std::string, driver::Format> formats = {{"text", driver::Format::Text},
                                                         {"csv", driver::Format::Csv}};
  driver::Format format = driver::Format::Text;
  app.add_option("--format", format, "Report format: text or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* analyze = app.add_subcommand("analyze", "Energy closed forms of every function");
  std::string program, model;
  driver::AnalyzeOptions aopts;
  analyze->add_option("program", program, ".sir file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--model", model, "Cost model file")->required()->check(CLI::ExistingFile);
  analyze->add_flag("--dump-hcir", aopts.dump_hcir, "Print the Horn clause program");
  analyze->add_flag("--dump-recurrences", aopts.dump_recurrences,
                    "Print cost equations, recurrences and solutions");
  analyze->add_flag("--trace", aopts.trace, "Print one line per stage on stderr");
  analyze->add_option("--format", format, "Report format: text or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* cmp = app.add_subcommand("compare", "Estimated energy against measurements");
  std::string functions, measurements;
  cmp->add_option("--functions", functions, "Closed forms, `name = form` per line")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--measurements", measurements, "CSV with header benchmark,sizes,hw_nj")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--format", format, "Report format: text or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      aopts.format = format;
      auto r = driver::analyze_files(program, model, aopts);
      if (aopts.trace)
        for (const auto& line : r.trace)
          std::cerr << "trace: " << line << "\n";
      std::cout << r.output;
      return r.exit_code;
    }
    auto table = driver::load_functions(driver::read_file(functions));
    auto rows = driver::parse_measurements(driver::read_file(measurements));
    std::cout << driver::render_comparison(driver::compare(table, rows), format);
    return 0;
  } catch (const Error& e) {
    std::cerr << "irenergy: " << e.what() << "\n";
    return 3;
  }
}
