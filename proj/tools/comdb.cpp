// comdb command-line front end.

#include "comdb/shell.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

int main(int argc, char** argv)
{
    CLI::App app{"comdb: in-memory concept-oriented database"};
    std::string schema_path, data_path, batch_path, query_text, format_name = "table";
    bool repl = false;
    app.add_option("--schema", schema_path, "schema file to load");
    app.add_option("--data", data_path, "data file to load (needs --schema)");
    auto* batch = app.add_option("--batch", batch_path, "run commands from a script; stop at the first error");
    auto* query = app.add_option("--query", query_text, "run one COQL query and exit");
    auto* rflag = app.add_flag("--repl", repl, "interactive shell (default when no script or query)");
    app.add_option("--format", format_name, "output format: table, tsv or json")->check(CLI::IsMember({"table", "tsv", "json"}));
    batch->excludes(query);
    batch->excludes(rflag);
    query->excludes(rflag);
    CLI11_PARSE(app, argc, argv);

    if (!data_path.empty() && schema_path.empty()) {
        std::cerr << "error: --data needs --schema\n";
        return 2;
    }
    const char* env = std::getenv("COMDB_COLOR");
    bool color = isatty(STDOUT_FILENO) && !(env && std::string(env) == "0");

    comdb::Shell shell(std::cout, std::cerr, *comdb::parse_format(format_name), color);
    if (!schema_path.empty()) {
        std::string cmd = "load \"" + schema_path + "\"" + (data_path.empty() ? "" : " \"" + data_path + "\"");
        std::ostringstream quiet;
        comdb::Shell loader(quiet, std::cerr);
        if (!loader.handle(cmd))
            return 1;
        shell.schema() = loader.schema();
    }

    if (!query_text.empty())
        return shell.handle("query " + query_text) ? 0 : 1;
    if (!batch_path.empty()) {
        std::ifstream in(batch_path);
        if (!in) {
            std::cerr << "error: IoError: cannot open '" << batch_path << "'\n";
            return 1;
        }
        return shell.run(in, true);
    }
    bool interactive = isatty(STDIN_FILENO);
    shell.run(std::cin, false, interactive ? "comdb> " : "");
    return 0;
}
