import numpy as np
import pytest

from lrdmd.toybench import BenchConfig, benchmark_data, run_benchmark

TOY_SEED = 7


@pytest.fixture(scope="session")
def toy_config():
    return BenchConfig(seed=TOY_SEED, measure_time=False)


@pytest.fixture(scope="session")
def full_bench_result(toy_config):
    return run_benchmark(toy_config)


@pytest.fixture(scope="session")
def setting_i_data(toy_config):
    return benchmark_data(toy_config, "i")


@pytest.fixture(scope="session")
def setting_ii_data(toy_config):
    return benchmark_data(toy_config, "ii")


@pytest.fixture(scope="session")
def setting_iii_data(toy_config):
    return benchmark_data(toy_config, "iii")


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
