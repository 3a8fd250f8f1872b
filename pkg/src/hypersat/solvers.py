"""External solver invocation: single runs and cancellable portfolios.

Solver definitions are data, not code: a command template plus verdict
regexes, loaded from an INI-style config file (section per solver) or taken
from the built-in defaults for the usual FOL/SMT provers.  Every solver is
optional at runtime; a missing binary raises SolverNotFoundError, which is
distinct from an Unknown verdict so callers can skip instead of fail.

A portfolio runs all members concurrently as separate OS processes; the
first decisive verdict wins and the remaining processes are killed (whole
process groups, so no orphans survive).  Conflicting decisive verdicts are
never resolved silently: they raise SoundnessConflictError.
"""

from __future__ import annotations

import configparser
import logging
import os
import re
import shlex
import shutil
import signal
import subprocess
import threading
import time
from dataclasses import dataclass
from enum import Enum

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 60.0
CONFIG_ENV_VAR = "HYPERSAT_SOLVER_CONFIG"

_SZS_SAT = r"SZS status (Satisfiable|CounterSatisfiable)"
_SZS_UNSAT = r"SZS status (Unsatisfiable|Theorem|ContradictoryAxioms)"


class SolverError(Exception):
    pass


class SolverNotFoundError(SolverError):
    """The solver binary is not installed; callers may skip, not fail."""


class SoundnessConflictError(SolverError):
    """Two portfolio members decided SAT and UNSAT on the same problem."""


class Verdict(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolverConfig:
    name: str
    command: str  # template with {input}, {timeout}, {timeout_ms}
    format: str  # "smtlib" or "tptp"
    sat_regex: str
    unsat_regex: str
    timeout_sec: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        if not self.command.strip():
            raise SolverError(f"solver {self.name}: empty command template")
        re.compile(self.sat_regex)
        re.compile(self.unsat_regex)

    def argv(self, problem_file: str) -> list:
        rendered = self.command.format(
            input=str(problem_file),
            timeout=int(self.timeout_sec),
            timeout_ms=int(self.timeout_sec * 1000),
        )
        return shlex.split(rendered)


@dataclass(frozen=True)
class SolverResult:
    verdict: Verdict
    solver: str
    elapsed: float
    detail: str = ""


DEFAULT_SOLVERS = (
    SolverConfig("z3", "z3 -T:{timeout} {input}", "smtlib",
                 r"^sat\s*$", r"^unsat\s*$"),
    SolverConfig("cvc5",
                 "cvc5 --tlimit={timeout_ms} --finite-model-find {input}",
                 "smtlib", r"^sat\s*$", r"^unsat\s*$"),
    SolverConfig("vampire", "vampire --input_syntax tptp -t {timeout} {input}",
                 "tptp", _SZS_SAT, _SZS_UNSAT),
    SolverConfig("eprover", "eprover --auto -s --cpu-limit={timeout} {input}",
                 "tptp", _SZS_SAT, _SZS_UNSAT),
    SolverConfig("iprover", "iproveropt --time_out_real {timeout} {input}",
                 "tptp", _SZS_SAT, _SZS_UNSAT),
    SolverConfig("paradox", "paradox --time {timeout} {input}", "tptp",
                 r"RESULT: Satisfiable", r"RESULT: Unsatisfiable"),
)


def load_solver_configs(path=None) -> list:
    """Solver configs from a file, the env-var override, or the defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return list(DEFAULT_SOLVERS)
    parser = configparser.ConfigParser()
    with open(path) as handle:
        parser.read_file(handle)
    configs = []
    for section in parser.sections():
        sec = parser[section]
        configs.append(SolverConfig(
            name=section,
            command=sec["command"],
            format=sec.get("format", "smtlib"),
            sat_regex=sec.get("sat_regex", r"^sat\s*$"),
            unsat_regex=sec.get("unsat_regex", r"^unsat\s*$"),
            timeout_sec=float(sec.get("timeout_sec", DEFAULT_TIMEOUT)),
        ))
    if not configs:
        raise SolverError(f"no solver sections in {path}")
    return configs


def solver_available(cfg: SolverConfig) -> bool:
    return shutil.which(cfg.argv("x")[0]) is not None


def _classify(output: str, cfg: SolverConfig) -> Verdict:
    sat_re = re.compile(cfg.sat_regex)
    unsat_re = re.compile(cfg.unsat_regex)
    for line in output.splitlines():
        if unsat_re.search(line):
            return Verdict.UNSAT
        if sat_re.search(line):
            return Verdict.SAT
    return Verdict.UNKNOWN


def _kill_group(proc: subprocess.Popen):
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        pass


def run_solver(cfg: SolverConfig, problem_file, cancel: threading.Event = None,
               register=None) -> SolverResult:
    """Run one solver on a problem file, enforcing the hard timeout.

    Output that matches neither verdict pattern (including crashes and
    timeouts) yields Unknown.
    """
    argv = cfg.argv(problem_file)
    if shutil.which(argv[0]) is None:
        raise SolverNotFoundError(f"{cfg.name}: binary {argv[0]!r} not found")
    if cancel is not None and cancel.is_set():
        return SolverResult(Verdict.UNKNOWN, cfg.name, 0.0, "cancelled")
    started = time.monotonic()
    proc = subprocess.Popen(argv, stdout=subprocess.PIPE,
                            stderr=subprocess.STDOUT, text=True,
                            start_new_session=True)
    if register is not None:
        register(proc)
    try:
        output, _ = proc.communicate(timeout=cfg.timeout_sec)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        proc.communicate()
        return SolverResult(Verdict.UNKNOWN, cfg.name,
                            time.monotonic() - started, "timeout")
    elapsed = time.monotonic() - started
    if cancel is not None and cancel.is_set():
        return SolverResult(Verdict.UNKNOWN, cfg.name, elapsed, "cancelled")
    return SolverResult(_classify(output or "", cfg), cfg.name, elapsed)


def run_portfolio(cfgs, problem_file) -> SolverResult:
    """Run all solvers concurrently; the first SAT/UNSAT wins.

    Remaining members are killed once a decisive verdict arrives.  Members
    whose binaries are missing are skipped with a warning; if nothing could
    run at all, SolverNotFoundError is raised.  A SAT/UNSAT disagreement
    between members raises SoundnessConflictError.
    """
    cfgs = list(cfgs)
    started = time.monotonic()
    cancel = threading.Event()
    procs: dict = {}
    decisive: list = []
    results: dict = {}
    lock = threading.Lock()

    def register_for(name):
        def register(proc):
            with lock:
                procs[name] = proc
                if cancel.is_set():
                    _kill_group(proc)
        return register

    def work(cfg: SolverConfig):
        try:
            result = run_solver(cfg, problem_file, cancel,
                                register_for(cfg.name))
        except SolverNotFoundError as exc:
            log.warning("skipping solver %s: %s", cfg.name, exc)
            results[cfg.name] = None
            return
        results[cfg.name] = result
        log.info("solver %s: %s in %.2fs%s", cfg.name, result.verdict.value,
                 result.elapsed,
                 f" ({result.detail})" if result.detail else "")
        if result.verdict is not Verdict.UNKNOWN:
            with lock:
                decisive.append(result)
                cancel.set()
                for other, proc in procs.items():
                    if other != cfg.name:
                        _kill_group(proc)

    threads = [threading.Thread(target=work, args=(cfg,), daemon=True)
               for cfg in cfgs]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    verdicts = {r.verdict for r in decisive}
    if Verdict.SAT in verdicts and Verdict.UNSAT in verdicts:
        detail = ", ".join(f"{r.solver}={r.verdict.value}" for r in decisive)
        raise SoundnessConflictError(f"portfolio disagreement: {detail}")
    if decisive:
        return decisive[0]
    if all(r is None for r in results.values()):
        raise SolverNotFoundError(
            "no configured solver is installed: "
            + ", ".join(cfg.name for cfg in cfgs))
    return SolverResult(Verdict.UNKNOWN, "portfolio",
                        time.monotonic() - started)
