"""Deterministic discrete-event simulator of cluster chunk repair.

Models a master plus data servers in the Hadoop mold: fixed-size chunks
are grouped into redundancy sets placed on distinct machines; when a
machine fails the master schedules one repair job per lost chunk.  A job
reads one chunk from each helper machine (1 for 3-way replication, k for
RS, f for the look-up repair of SRC, whose helper machines come from the
repair module's plans), streams them to a rebuild target, and writes the
rebuilt chunk there; a degraded read is the same pipeline minus the
write-back.

Transfers are fluid flows with max-min fair rates over four resources
per machine (net up, net down, disk read, disk write), recomputed at
event boundaries (progressive filling).  Reads, transfer, and write-back
are pipelined inside a job, so with the default disk speeds the 1 Gb/s
link is the only binding resource.  Concurrency is throttled by a
master-level dispatch window plus a per-machine cap on concurrent
inbound rebuilds, both config knobs.

The event loop is single-threaded and fully deterministic: identical
config and seed give bit-identical reports.  Run different configs in
parallel processes if needed; a cluster is immutable once built.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .core import SrcParams, layout
from .errors import ParameterError, PlacementError
from .repair import chunk_repair_plan

GBIT = 1e9 / 8  # bytes/s of a 1 Gb/s link


@dataclass(frozen=True)
class Scheme:
    """Redundancy scheme descriptor: 3-way replication, RS(n, k), or
    SRC(n, k, f)."""

    kind: str                 # "replication" | "rs" | "src"
    n: int                    # members per redundancy set
    k: int
    f: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("replication", "rs", "src"):
            raise ParameterError(f"unknown scheme kind {self.kind!r}")
        if self.kind == "src" and (self.f is None or self.f < 1):
            raise ParameterError("src scheme needs f >= 1")
        if self.kind != "replication" and not 1 <= self.k < self.n:
            raise ParameterError(f"need 1 <= k < n, got n={self.n}, k={self.k}")

    @classmethod
    def replication(cls, copies: int = 3) -> "Scheme":
        return cls(kind="replication", n=copies, k=1)

    @classmethod
    def rs(cls, n: int, k: int) -> "Scheme":
        return cls(kind="rs", n=n, k=k)

    @classmethod
    def src(cls, n: int, k: int, f: int) -> "Scheme":
        return cls(kind="src", n=n, k=k, f=f)

    @property
    def chunks_per_member(self) -> int:
        return self.f + 1 if self.kind == "src" else 1

    @property
    def helper_reads(self) -> int:
        """Chunks read to repair one lost chunk: 1 / k / f."""
        if self.kind == "replication":
            return 1
        if self.kind == "rs":
            return self.k
        return self.f

    @property
    def label(self) -> str:
        if self.kind == "replication":
            return f"{self.n}-way-replication"
        if self.kind == "rs":
            return f"RS({self.n},{self.k})"
        return f"SRC({self.n},{self.k},{self.f})"


@dataclass(frozen=True)
class ClusterConfig:
    scheme: Scheme
    machines: int = 100
    data_bytes_per_machine: int = 4_000_000_000
    chunk_size: int = 64 * 2**20
    net_bytes_per_s: float = GBIT
    disk_read_bytes_per_s: float = 200e6
    disk_write_bytes_per_s: float = 200e6
    max_inbound_repairs: int = 2      # concurrent rebuilds landing per machine
    dispatch_window: int = 8          # concurrent repair jobs cluster-wide
    seed: int = 1

    def __post_init__(self) -> None:
        if self.machines <= self.scheme.n:
            raise PlacementError(
                f"{self.machines} machines cannot host width-{self.scheme.n} "
                f"sets plus a rebuild target")
        if min(self.net_bytes_per_s, self.disk_read_bytes_per_s,
               self.disk_write_bytes_per_s) <= 0:
            raise ParameterError("bandwidths must be positive")
        if self.chunk_size < 1 or self.data_bytes_per_machine < 1:
            raise ParameterError("sizes must be positive")
        if self.max_inbound_repairs < 1 or self.dispatch_window < 1:
            raise ParameterError("concurrency knobs must be >= 1")

    @property
    def chunks_per_machine(self) -> int:
        return max(1, round(self.data_bytes_per_machine / self.chunk_size))


@dataclass(frozen=True)
class Cluster:
    """Placement result: redundancy sets over machines (0-based ids).

    sets[j] is the tuple of member machines of set j; for SRC the tuple
    position is the storage-node index (position p = node p+1) and each
    member holds f+1 chunks of the set.
    """

    config: ClusterConfig
    sets: tuple[tuple[int, ...], ...]
    memberships: dict[int, tuple[tuple[int, int], ...]]  # machine -> (set, pos)
    slots_per_machine: tuple[int, ...]


def build_cluster(config: ClusterConfig) -> Cluster:
    """Place redundancy sets on least-loaded machines with seeded
    tie-breaking; deterministic for a fixed seed."""
    import heapq

    scheme = config.scheme
    rng = random.Random(f"{config.seed}:placement")
    slots_per_set = scheme.n * scheme.chunks_per_member
    total_slots = config.machines * config.chunks_per_machine
    set_count = total_slots // slots_per_set
    if set_count < 1:
        raise PlacementError("not enough chunk slots for a single redundancy set")

    heap = [(0, rng.random(), m) for m in range(config.machines)]
    heapq.heapify(heap)
    sets = []
    memberships: dict[int, list[tuple[int, int]]] = {m: [] for m in range(config.machines)}
    loads = [0] * config.machines
    for set_id in range(set_count):
        picked = [heapq.heappop(heap) for _ in range(scheme.n)]
        members = tuple(m for _, _, m in picked)
        sets.append(members)
        for pos, m in enumerate(members):
            memberships[m].append((set_id, pos))
            loads[m] += scheme.chunks_per_member
            heapq.heappush(heap, (loads[m], rng.random(), m))
    return Cluster(
        config=config,
        sets=tuple(sets),
        memberships={m: tuple(v) for m, v in memberships.items()},
        slots_per_machine=tuple(loads),
    )


@dataclass
class _Job:
    job_id: int
    set_id: int
    chunk_label: str
    sources: tuple[int, ...]   # helper machines, one chunk read from each
    dest: int = -1
    start: float = -1.0
    finish: float = -1.0


@dataclass
class _Flow:
    src: int
    dst: int
    remaining: float
    job: _Job
    rate: float = 0.0


@dataclass(frozen=True)
class SimReport:
    """Outcome of one failure experiment.  Durations are per repaired
    chunk, measured from the failure instant to that chunk's completion
    (queueing included), in layout order."""

    scheme: str
    seed: int
    machines: int
    chunks_per_machine: int
    failed_machine: int
    degraded: bool
    lost_chunks: int
    helper_reads_per_chunk: int
    durations: tuple[float, ...]
    elapsed: float
    throughput: float            # lost bytes / elapsed, bytes per second
    bytes_read: int
    bytes_transferred: int
    bytes_written: int
    disk_accesses: int           # sum over jobs of distinct helper machines
    data_loss: bool

    def to_text(self) -> str:
        mode = "degraded-read" if self.degraded else "repair"
        lines = [
            f"scheme={self.scheme} mode={mode} seed={self.seed}",
            f"machines={self.machines} chunks_per_machine={self.chunks_per_machine} "
            f"failed_machine={self.failed_machine}",
            f"lost_chunks={self.lost_chunks} helper_reads_per_chunk={self.helper_reads_per_chunk}",
            f"elapsed_s={self.elapsed!r}",
            f"throughput_bytes_per_s={self.throughput!r}",
            f"bytes_read={self.bytes_read} bytes_transferred={self.bytes_transferred} "
            f"bytes_written={self.bytes_written}",
            f"disk_accesses={self.disk_accesses} data_loss={self.data_loss}",
            "chunk_durations_s=" + ",".join(repr(d) for d in self.durations),
        ]
        return "\n".join(lines)


def _make_jobs(cluster: Cluster, failed: int,
               rng: random.Random) -> tuple[list[_Job], bool]:
    config = cluster.config
    scheme = config.scheme
    jobs: list[_Job] = []
    data_loss = False
    src_params = None
    if scheme.kind == "src":
        src_params = SrcParams(scheme.n, scheme.k, scheme.f, config.chunk_size)
        lay = layout(src_params)

    for set_id, pos in cluster.memberships.get(failed, ()):
        members = cluster.sets[set_id]
        survivors = [m for m in members if m != failed]
        needed = 1 if scheme.kind == "replication" else scheme.k
        if len(survivors) < needed:
            data_loss = True
            continue
        if scheme.kind == "replication":
            helper = rng.choice(sorted(survivors))
            jobs.append(_Job(len(jobs), set_id, "copy", (helper,)))
        elif scheme.kind == "rs":
            helpers = tuple(rng.sample(sorted(survivors), scheme.k))
            jobs.append(_Job(len(jobs), set_id, "rs-chunk", helpers))
        else:
            node = pos + 1
            for cid in lay.node_chunks(node):
                plan = chunk_repair_plan(src_params, cid)
                helpers = tuple(members[h - 1] for h, _ in plan.reads)
                assert failed not in helpers
                jobs.append(_Job(len(jobs), set_id, cid.label(scheme.f), helpers))
    return jobs, data_loss


def _allocate(flows: list[_Flow], config: ClusterConfig, degraded: bool) -> None:
    """Max-min fair rates by progressive filling over machine resources."""
    res_residual: dict[tuple[str, int], float] = {}
    res_flows: dict[tuple[str, int], list[_Flow]] = {}

    def touch(key: tuple[str, int], cap: float, flow: _Flow) -> None:
        if key not in res_residual:
            res_residual[key] = cap
            res_flows[key] = []
        res_flows[key].append(flow)

    for fl in flows:
        touch(("up", fl.src), config.net_bytes_per_s, fl)
        touch(("rd", fl.src), config.disk_read_bytes_per_s, fl)
        touch(("dn", fl.dst), config.net_bytes_per_s, fl)
        if not degraded:
            touch(("wr", fl.dst), config.disk_write_bytes_per_s, fl)

    frozen: set[int] = set()
    live_count = {key: len(v) for key, v in res_flows.items()}
    while len(frozen) < len(flows):
        best_key, best_share = None, None
        for key, count in live_count.items():
            if count <= 0:
                continue
            share = max(res_residual[key], 0.0) / count
            if best_share is None or share < best_share:
                best_key, best_share = key, share
        assert best_key is not None
        rate = max(best_share, 1e-9)  # float-dust floor; reallocated next event
        for fl in res_flows[best_key]:
            if id(fl) in frozen:
                continue
            fl.rate = rate
            frozen.add(id(fl))
            for key in (("up", fl.src), ("rd", fl.src), ("dn", fl.dst),
                        ("wr", fl.dst)):
                if key in res_residual:
                    res_residual[key] -= rate
                    live_count[key] -= 1
        live_count[best_key] = 0


def _run(cluster: Cluster, failed: int, degraded: bool,
         workload: int | None = None) -> SimReport:
    config = cluster.config
    scheme = config.scheme
    if not 0 <= failed < config.machines:
        raise ParameterError(f"failed machine {failed} outside cluster")
    rng = random.Random(f"{config.seed}:jobs")
    jobs, data_loss = _make_jobs(cluster, failed, rng)
    if workload is not None:
        jobs = jobs[:workload]
    for job in jobs:
        assert len(job.sources) == scheme.helper_reads

    priority = [rng.random() for _ in range(config.machines)]
    inbound = [0] * config.machines
    live = [m != failed for m in range(config.machines)]

    pending = deque(jobs)
    active_flows: list[_Flow] = []
    open_jobs: dict[int, int] = {}   # job_id -> flows outstanding
    t = 0.0
    eps = 1e-3

    def pick_dest(job: _Job) -> int | None:
        members = set(cluster.sets[job.set_id])
        best, best_key = None, None
        for m in range(config.machines):
            if not live[m] or m in members:
                continue
            if inbound[m] >= config.max_inbound_repairs:
                continue
            key = (inbound[m], priority[m], m)
            if best_key is None or key < best_key:
                best, best_key = m, key
        return best

    def dispatch() -> None:
        while pending and len(open_jobs) < config.dispatch_window:
            dest = pick_dest(pending[0])
            if dest is None:
                return
            job = pending.popleft()
            job.dest = dest
            job.start = t
            inbound[dest] += 1
            open_jobs[job.job_id] = len(job.sources)
            for src in job.sources:
                active_flows.append(
                    _Flow(src=src, dst=dest, remaining=float(config.chunk_size),
                          job=job))

    dispatch()
    while active_flows:
        _allocate(active_flows, config, degraded)
        dt = min(fl.remaining / fl.rate for fl in active_flows)
        t += dt
        still = []
        for fl in active_flows:
            fl.remaining -= fl.rate * dt
            if fl.remaining <= eps:
                job = fl.job
                open_jobs[job.job_id] -= 1
                if open_jobs[job.job_id] == 0:
                    del open_jobs[job.job_id]
                    job.finish = t
                    inbound[job.dest] -= 1
            else:
                still.append(fl)
        active_flows = still
        dispatch()
    if pending:
        raise RuntimeError("scheduler stalled with pending jobs")

    cs = config.chunk_size
    reads = sum(len(j.sources) for j in jobs)
    durations = tuple(j.finish for j in jobs)
    elapsed = max(durations) if durations else 0.0
    lost_bytes = len(jobs) * cs
    return SimReport(
        scheme=scheme.label,
        seed=config.seed,
        machines=config.machines,
        chunks_per_machine=config.chunks_per_machine,
        failed_machine=failed,
        degraded=degraded,
        lost_chunks=len(jobs),
        helper_reads_per_chunk=scheme.helper_reads,
        durations=durations,
        elapsed=elapsed,
        throughput=lost_bytes / elapsed if elapsed else 0.0,
        bytes_read=reads * cs,
        bytes_transferred=reads * cs,
        bytes_written=0 if degraded else lost_bytes,
        disk_accesses=sum(len(set(j.sources)) for j in jobs),
        data_loss=data_loss,
    )


def run_node_failure(cluster: Cluster, failed: int) -> SimReport:
    """Fail one machine and repair every chunk it held."""
    return _run(cluster, failed, degraded=False)


def run_degraded_read(cluster: Cluster, failed: int,
                      workload: int | None = None) -> SimReport:
    """Serve reads of the failed machine's chunks without writing the
    repaired data back.  workload limits how many lost chunks are read
    (default: all of them)."""
    return _run(cluster, failed, degraded=True, workload=workload)


def repair_time_cdf(report: SimReport) -> list[tuple[float, float]]:
    """Sorted (duration, percentile) points; percentile of the i-th of N
    sorted durations is (i+1)/N, so the last point is (max, 1.0)."""
    if not report.durations:
        return []
    times = sorted(report.durations)
    n = len(times)
    return [(d, (i + 1) / n) for i, d in enumerate(times)]


def cdf_csv(report: SimReport) -> str:
    lines = ["repair_time_s,percentile"]
    for d, p in repair_time_cdf(report):
        lines.append(f"{d!r},{p!r}")
    return "\n".join(lines)
