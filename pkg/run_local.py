import os
import argparse
import subprocess
import signal
import sys
import time
from pathlib import Path

import numpy as np
import redis

from src.config import settings


def worker_command(concurrency, loglevel, queue, name=None):
    cmd = [
        "celery", "-A", "src.worker.celery_app", "worker",
        "--loglevel", loglevel,
        "--concurrency", str(concurrency),
        "-Q", queue,
    ]
    if name is not None:
        cmd += ["--hostname", f"{name}@%h"]
    return cmd


def start_workers(count, concurrency, loglevel, queue):
    """Spawn `count` sampling workers and block until SIGINT/SIGTERM."""
    processes = []
    for i in range(count):
        print(f"Starting sampling worker{i + 1} (concurrency {concurrency}, queue {queue})")
        processes.append(subprocess.Popen(worker_command(concurrency, loglevel, queue, f"worker{i + 1}")))

    def shutdown(sig, frame):
        print(f"Stopping {len(processes)} worker(s)...")
        for p in processes:
            p.terminate()
        for p in processes:
            try:
                p.wait(timeout=10)
            except subprocess.TimeoutExpired:
                p.kill()
        sys.exit(0)

    signal.signal(signal.SIGINT, shutdown)
    signal.signal(signal.SIGTERM, shutdown)

    while True:
        dead = [p for p in processes if p.poll() is not None]
        if len(dead) == len(processes):
            print("All workers exited")
            sys.exit(1)
        time.sleep(1)


def check_broker():
    """Ping the Redis broker that carries sample_chunk tasks."""
    print(f"Checking broker at {settings.CELERY_BROKER_URL}...")
    try:
        redis.Redis.from_url(settings.CELERY_BROKER_URL).ping()
    except redis.ConnectionError as e:
        print(f"❌ Broker unreachable: {e}")
        return False
    except Exception as e:
        print(f"❌ Broker check failed: {e}")
        return False
    print("✅ Broker reachable")
    return True


def check_output_dir():
    """The CLI writes result files and sidecars under LATTICE_OUTPUT_DIR."""
    target = Path(settings.OUTPUT_DIR)
    print(f"Checking output directory {target}...")
    try:
        target.mkdir(parents=True, exist_ok=True)
        probe = target / ".write_probe"
        probe.write_text("ok")
        probe.unlink()
    except OSError as e:
        print(f"❌ Output directory not writable: {e}")
        return False
    print("✅ Output directory writable")
    return True


def smoke_test():
    """
    Send a two-chunk batch through running workers and compare it with local generation.

    Returns:
        bool: True when the celery backend reproduces the local batch bit for bit
    """
    from src.sampling.engine import generate_batch
    from src.sampling.schemas import RhoSpec, Scenario

    scenario = Scenario(case='iid_uniform', d=2)
    args = (scenario, 100.0, 2000, RhoSpec.uniform(), 1)
    print("Running smoke batch through the celery backend...")
    start = time.time()
    try:
        remote = generate_batch(*args, backend='celery', chunk_size=1000)
    except Exception as e:
        print(f"❌ Smoke batch failed: {e}")
        return False
    local = generate_batch(*args, backend='local', chunk_size=1000)
    if not np.array_equal(remote.delta_samples, local.delta_samples):
        print("❌ Worker output differs from local generation")
        return False
    print(f"✅ Smoke batch matched local generation ({round(time.time() - start, 3)}s)")
    return True


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run sampling workers for the lattice statistics toolkit locally")
    parser.add_argument("--workers", type=int, default=1, help="Number of worker processes to start")
    parser.add_argument("--concurrency", type=int, default=settings.CELERY_WORKER_CONCURRENCY, help="Chunks per worker")
    parser.add_argument("--queue", default=settings.CELERY_QUEUE, help="Queue to consume")
    parser.add_argument("--loglevel", default="info", help="Log level for Celery worker")
    parser.add_argument("--skip-checks", action="store_true", help="Skip broker and output checks")
    parser.add_argument("--smoke", action="store_true",
                        help="Only send a smoke batch to already running workers and exit")

    args = parser.parse_args()

    Path(os.getenv('LOG_DIR', 'logs')).mkdir(exist_ok=True)

    if args.smoke:
        sys.exit(0 if check_broker() and smoke_test() else 1)

    if not args.skip_checks:
        print("\n=== Checking dependencies ===")
        broker_ok = check_broker()
        output_ok = check_output_dir()

        if not broker_ok:
            print("\n⚠️ Workers cannot receive chunks without the broker.")
            if input("Start anyway? (y/n): ").lower() != 'y':
                print("Exiting...")
                sys.exit(1)

        if not output_ok:
            print("\n⚠️ CLI runs will fail to save results (exit code 3).")

        print("\n=== All checks completed ===\n")

    start_workers(args.workers, args.concurrency, args.loglevel, args.queue)
