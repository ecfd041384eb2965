#include "commands.hpp"

#include "ipl/simulate.hpp"
#include "ipl/textio.hpp"

#include <omp.h>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ipl::cli;
  CLI::App app{"Exact formulas, simulation and asymptotics for flat, half-flat and restricted LPP and polymers"};
  app.set_version_flag("--version", ipl::kToolVersion);
  app.require_subcommand(1);

  Context ctx;
  ctx.app = &app;
  ctx.argv.assign(argv, argv + argc);
  ctx.seed = ipl::seed_from_env(20240601);
  app.add_option("--seed", ctx.seed, "random seed (default from IPL_SEED)");
  app.add_option("--threads", ctx.threads, "worker threads (default: all available)");
  app.add_option("--tol", ctx.tol, "override the tolerance of the selected computation");
  app.parse_complete_callback([&ctx] {
    if (ctx.threads < 0) throw CLI::ValidationError("--threads", "must be nonnegative");
    if (ctx.threads > 0) omp_set_num_threads(ctx.threads);
    if (ctx.tol < 0) throw CLI::ValidationError("--tol", "must be positive");
  });
  app.fallthrough();
  register_commands(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ContractFailure& e) {
    std::cout << e.report.dump(2) << std::endl;
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
