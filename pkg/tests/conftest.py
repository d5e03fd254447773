import numpy as np
import pytest


@pytest.fixture
def worked_unitary():
    """The 4-mode discrete-Fourier-style network used in the worked examples."""
    return 0.5 * np.array(
        [
            [1, 1, 1, 1],
            [1, 1j, -1, -1j],
            [1, -1, 1, -1],
            [1, -1j, -1, 1j],
        ],
        dtype=complex,
    )
