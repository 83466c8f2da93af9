import pytest
from threadpoolctl import threadpool_limits


@pytest.fixture(scope="session", autouse=True)
def single_threaded_blas():
    # every factorization in the suite is tall-and-skinny; BLAS threading
    # only adds spin overhead (and badly oversubscribes threaded batches)
    with threadpool_limits(limits=1, user_api="blas"):
        yield
