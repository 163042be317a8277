""" Helpers for distributing independent jobs over processes. """

import multiprocessing
from typing import Callable, Iterable, List

import psutil
from tqdm import tqdm


def resolve_n_processes(n_processes: int = None) -> int:
    """ Returns the number of processes to use.

    Args:
        n_processes: The requested number of processes.  If None, this will be set to the number of processors on the
        machine.

    Returns:
        n: The number of processes, at least 1.
    """
    if n_processes is None:
        n_processes = psutil.cpu_count() or 1
    return max(1, int(n_processes))


def pooled_map(f: Callable, jobs: Iterable, n_processes: int = 1, verbose: bool = False, desc: str = None,
               n_jobs: int = None) -> List:
    """ Applies f to every job, in order, optionally across multiple processes.

    Results are returned in the order of the jobs regardless of how many processes are used.  f must be a top-level
    function so it can be pickled.

    Args:
        f: The function to apply.  It is called with a single job as its argument.

        jobs: The jobs.

        n_processes: The number of processes to use.  If 1, jobs are processed serially in this process.

        verbose: True if a progress bar should be shown.

        desc: Label for the progress bar.

        n_jobs: The number of jobs, used by the progress bar when jobs has no length.

    Returns:
        rs: rs[i] is f applied to the i^th job.
    """
    n_processes = resolve_n_processes(n_processes)
    if n_jobs is None and hasattr(jobs, '__len__'):
        n_jobs = len(jobs)

    if n_processes == 1:
        return list(tqdm(map(f, jobs), total=n_jobs, desc=desc, disable=not verbose))

    with multiprocessing.Pool(n_processes) as pool:
        return list(tqdm(pool.imap(f, jobs, chunksize=4), total=n_jobs, desc=desc, disable=not verbose))
