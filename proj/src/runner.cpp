#include "mtafp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <condition_variable>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "mtafp/digest.hpp"

namespace mtafp {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Adapter validation
// ---------------------------------------------------------------------------

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

std::string shell_quote(const std::string& s) {
    std::string quoted = "'";
    for (char c : s) {
        if (c == '\'')
            quoted += "'\\''";
        else
            quoted.push_back(c);
    }
    quoted.push_back('\'');
    return quoted;
}

std::string expand_template(const std::string& tmpl, const fs::path& input_fasta,
                            const fs::path& output_file) {
    std::string cmd = tmpl;
    auto replace_once = [&](const std::string& placeholder, const fs::path& value) {
        std::size_t pos = cmd.find(placeholder);
        cmd.replace(pos, placeholder.size(), shell_quote(value.string()));
    };
    replace_once("{input_fasta}", input_fasta);
    replace_once("{output_file}", output_file);
    return cmd;
}

} // namespace

void ToolAdapter::validate() const {
    if (tool_id.empty()) throw ValidationError("tool adapter with empty tool_id");
    if (is_subprocess()) {
        const auto& sp = subprocess();
        if (count_occurrences(sp.command_template, "{input_fasta}") != 1 ||
            count_occurrences(sp.command_template, "{output_file}") != 1)
            throw ValidationError("tool " + tool_id +
                                  ": command template must contain {input_fasta} and "
                                  "{output_file} exactly once each");
        if (sp.timeout.count() <= 0)
            throw ValidationError("tool " + tool_id + ": timeout must be positive");
    } else {
        if (offline().manifest_path.empty())
            throw ValidationError("tool " + tool_id + ": offline adapter without manifest path");
    }
}

// ---------------------------------------------------------------------------
// Subprocess execution
// ---------------------------------------------------------------------------

SpawnOutcome spawn_with_timeout(const std::string& command, const fs::path& working_dir,
                                std::chrono::milliseconds timeout,
                                const std::vector<std::string>& env_allowlist) {
    int pipe_fds[2];
    if (pipe(pipe_fds) != 0) throw Error(std::string("pipe failed: ") + std::strerror(errno));

    // Child environment from the allow-list only.
    std::vector<std::string> env_storage;
    for (const auto& name : env_allowlist) {
        if (const char* value = std::getenv(name.c_str()))
            env_storage.push_back(name + "=" + value);
    }
    std::vector<char*> envp;
    for (auto& e : env_storage) envp.push_back(e.data());
    envp.push_back(nullptr);

    pid_t pid = fork();
    if (pid < 0) {
        close(pipe_fds[0]);
        close(pipe_fds[1]);
        throw Error(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        setpgid(0, 0); // own process group so a timeout kill reaps helpers too
        close(pipe_fds[0]);
        dup2(pipe_fds[1], STDOUT_FILENO);
        dup2(pipe_fds[1], STDERR_FILENO);
        close(pipe_fds[1]);
        if (!working_dir.empty() && chdir(working_dir.c_str()) != 0) _exit(127);
        execle("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr), envp.data());
        _exit(127);
    }

    close(pipe_fds[1]);
    fcntl(pipe_fds[0], F_SETFL, O_NONBLOCK);

    SpawnOutcome outcome;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    // Once the tool itself has exited, trailing output is collected for at
    // most this long; an orphan holding the pipe open cannot stall the run.
    constexpr auto kDrainGrace = std::chrono::seconds(2);
    std::chrono::steady_clock::time_point drain_deadline;
    bool child_done = false;
    int wait_status = 0;

    auto drain = [&]() {
        char buf[4096];
        while (true) {
            ssize_t n = read(pipe_fds[0], buf, sizeof(buf));
            if (n > 0) {
                std::size_t room = kDiagnosticsByteBudget > outcome.captured_output.size()
                                       ? kDiagnosticsByteBudget - outcome.captured_output.size()
                                       : 0;
                outcome.captured_output.append(buf, std::min<std::size_t>(n, room));
            } else if (n == 0) {
                return true; // EOF
            } else {
                return false; // EAGAIN or error; try again later
            }
        }
    };

    bool eof = false;
    while (true) {
        if (!child_done) {
            pid_t r = waitpid(pid, &wait_status, WNOHANG);
            if (r == pid) {
                child_done = true;
                drain_deadline =
                    std::min(deadline, std::chrono::steady_clock::now() + kDrainGrace);
            }
        }
        if (!eof) eof = drain();
        if (child_done && eof) break;

        auto now = std::chrono::steady_clock::now();
        if (!child_done && now >= deadline) {
            outcome.timed_out = true;
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            waitpid(pid, &wait_status, 0);
            child_done = true;
            drain();
            break;
        }
        if (child_done && now >= drain_deadline) {
            kill(-pid, SIGKILL); // an orphan still holds the pipe; cut loose
            break;
        }

        struct pollfd pfd{pipe_fds[0], POLLIN, 0};
        auto cutoff = child_done ? drain_deadline : deadline;
        auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(cutoff - now).count();
        poll(&pfd, 1, static_cast<int>(std::clamp<long long>(remaining, 1, 20)));
    }
    close(pipe_fds[0]);

    if (!outcome.timed_out) {
        if (WIFEXITED(wait_status))
            outcome.exit_code = WEXITSTATUS(wait_status);
        else if (WIFSIGNALED(wait_status))
            outcome.exit_code = 128 + WTERMSIG(wait_status);
        else
            outcome.exit_code = -1;
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// Single-tool execution
// ---------------------------------------------------------------------------

std::string sanitize_record_id(const std::string& record_id) {
    std::string safe = record_id;
    for (char& c : safe)
        if (c == '|' || c == '/' || c == '\\') c = '_';
    return safe;
}

namespace {

// Offline manifests: record_id <TAB> path, '#' comments allowed.
std::map<std::string, fs::path> load_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ParseError("cannot open offline manifest: " + manifest_path.string());
    std::map<std::string, fs::path> manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(manifest_path.string() + " line " + std::to_string(line_no) +
                             ": expected 'record_id<TAB>path'");
        fs::path p = line.substr(tab + 1);
        if (p.is_relative()) p = manifest_path.parent_path() / p;
        manifest[line.substr(0, tab)] = p;
    }
    return manifest;
}

RunResult validate_prediction_artifact(const ToolAdapter& adapter, const std::string& record_id,
                                       const fs::path& prediction_path, std::string diagnostics) {
    if (!fs::exists(prediction_path)) {
        return {adapter.tool_id, record_id,
                RunToolError{0, "tool produced no output file at " + prediction_path.string() +
                                    (diagnostics.empty() ? "" : "\n" + diagnostics)}};
    }
    try {
        parse_predictions_file(prediction_path.string(), adapter.prediction_format);
    } catch (const Error& e) {
        return {adapter.tool_id, record_id, RunToolError{0, std::string("unparseable output: ") + e.what()}};
    }
    // Absolute so downstream stages are independent of the campaign cwd.
    return {adapter.tool_id, record_id, RunOk{fs::absolute(prediction_path)}};
}

} // namespace

RunResult run_tool(const ToolAdapter& adapter, const ProteinRecord& record,
                   const fs::path& out_dir) {
    adapter.validate();

    if (!adapter.is_subprocess()) {
        const auto& mode = adapter.offline();
        std::map<std::string, fs::path> manifest;
        try {
            manifest = load_manifest(mode.manifest_path);
        } catch (const Error& e) {
            return {adapter.tool_id, record.id, RunToolError{0, e.what()}};
        }
        auto it = manifest.find(record.id);
        if (it == manifest.end())
            return {adapter.tool_id, record.id,
                    RunToolError{0, "missing-output: record " + record.id +
                                        " not present in manifest " +
                                        mode.manifest_path.string()}};
        return validate_prediction_artifact(adapter, record.id, it->second, "");
    }

    const auto& mode = adapter.subprocess();
    fs::create_directories(out_dir / "work");
    fs::create_directories(out_dir / "predictions" / adapter.tool_id);

    const std::string digest = to_hex(fnv1a64(record.sequence.str()));
    const std::string safe_id = sanitize_record_id(record.id);
    fs::path input_fasta = out_dir / "work" / (safe_id + "__" + digest + ".fasta");
    fs::path output_file =
        out_dir / "predictions" / adapter.tool_id / (safe_id + "__" + digest + ".out");

    // The digest in the name pins the content, so an existing input file is
    // reusable as-is. Fresh writes go through a rename so concurrent tasks
    // for the same record never expose a half-written file to a tool.
    if (!fs::exists(input_fasta)) {
        fs::path staging = input_fasta;
        staging += "." + std::to_string(::getpid()) + "." +
                   std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
                   ".tmp";
        write_fasta_file(staging.string(), {record});
        fs::rename(staging, input_fasta);
    }
    std::error_code ec;
    fs::remove(output_file, ec); // stale artifact must not mask a failed run

    std::string command = expand_template(mode.command_template, fs::absolute(input_fasta),
                                          fs::absolute(output_file));
    SpawnOutcome spawn = spawn_with_timeout(command, mode.working_dir, mode.timeout,
                                            mode.env_allowlist);
    if (spawn.timed_out) return {adapter.tool_id, record.id, RunTimeout{}};
    if (spawn.exit_code != 0)
        return {adapter.tool_id, record.id,
                RunToolError{spawn.exit_code, spawn.captured_output}};
    return validate_prediction_artifact(adapter, record.id, output_file, spawn.captured_output);
}

// ---------------------------------------------------------------------------
// Campaign execution
// ---------------------------------------------------------------------------

std::vector<ProteinRecord> distinct_records(const std::vector<TestCasePair>& pairs) {
    std::map<std::string, const ProteinRecord*> by_id;
    auto add = [&](const ProteinRecord& rec) {
        auto [it, inserted] = by_id.emplace(rec.id, &rec);
        if (!inserted && !(*it->second == rec))
            throw ValidationError("record id " + rec.id + " maps to two different records");
    };
    for (const auto& pair : pairs) {
        add(pair.source);
        add(pair.follow_up);
    }
    std::vector<ProteinRecord> records;
    records.reserve(by_id.size());
    for (const auto& [id, rec] : by_id) records.push_back(*rec);
    return records;
}

CampaignRun execute_campaign(const std::vector<TestCasePair>& pairs,
                             const std::vector<ToolAdapter>& adapters,
                             const CampaignOptions& options) {
    for (const auto& adapter : adapters) adapter.validate();
    const std::vector<ProteinRecord> records = distinct_records(pairs);
    fs::create_directories(options.out_dir);

    struct Task {
        const ToolAdapter* adapter;
        const ProteinRecord* record;
    };
    std::vector<Task> tasks;
    for (const auto& adapter : adapters)
        for (const auto& record : records) tasks.push_back({&adapter, &record});

    CampaignRun run;
    std::mutex results_mutex;
    std::atomic<std::size_t> next_task{0};
    std::atomic<std::size_t> launches{0};

    auto cached_artifact = [&](const ToolAdapter& adapter,
                               const ProteinRecord& record) -> std::optional<fs::path> {
        if (!options.cache || !adapter.is_subprocess()) return std::nullopt;
        const std::string digest = to_hex(fnv1a64(record.sequence.str()));
        fs::path artifact = options.out_dir / "predictions" / adapter.tool_id /
                            (sanitize_record_id(record.id) + "__" + digest + ".out");
        if (!fs::exists(artifact)) return std::nullopt;
        try {
            parse_predictions_file(artifact.string(), adapter.prediction_format);
        } catch (const Error&) {
            return std::nullopt; // corrupt cache entry: rerun the tool
        }
        return fs::absolute(artifact);
    };

    auto worker = [&]() {
        while (true) {
            std::size_t index = next_task.fetch_add(1);
            if (index >= tasks.size()) return;
            const Task& task = tasks[index];
            RunResult result{task.adapter->tool_id, task.record->id, RunToolError{0, ""}};
            try {
                if (auto hit = cached_artifact(*task.adapter, *task.record)) {
                    result = RunResult{task.adapter->tool_id, task.record->id, RunOk{*hit}};
                } else {
                    if (task.adapter->is_subprocess()) launches.fetch_add(1);
                    result = run_tool(*task.adapter, *task.record, options.out_dir);
                }
            } catch (const std::exception& e) {
                // A failure for one (tool, record) never blocks the others.
                result = RunResult{task.adapter->tool_id, task.record->id,
                                   RunToolError{-1, std::string("harness error: ") + e.what()}};
            }
            std::lock_guard<std::mutex> lock(results_mutex);
            run.results.emplace(RunKey{result.tool_id, result.record_id}, std::move(result));
        }
    };

    std::size_t worker_count = options.max_workers;
    if (worker_count == 0) {
        worker_count = std::thread::hardware_concurrency();
        if (worker_count == 0) worker_count = 4;
    }
    worker_count = std::min(worker_count, std::max<std::size_t>(tasks.size(), 1));

    std::vector<std::thread> threads;
    threads.reserve(worker_count);
    for (std::size_t i = 0; i < worker_count; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    run.subprocess_launches = launches.load();
    return run;
}

} // namespace mtafp
