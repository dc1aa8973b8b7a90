import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite", deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

TESTS_DIR = Path(__file__).parent
HELPERS_DIR = TESTS_DIR / "helpers"
FIXTURES_DIR = TESTS_DIR / "fixtures"


@pytest.fixture
def corrector_cmds():
    """Command-template pair for the mock corrector, parameterized by mode."""
    script = HELPERS_DIR / "mock_corrector.py"

    def build(mode: str = "identity") -> tuple[str, str]:
        train = (f"{sys.executable} {script} train --mode {mode} "
                 "--train-file {train_file} --model-dir {model_dir}")
        infer = (f"{sys.executable} {script} infer "
                 "--model-dir {model_dir} "
                 "--input {input_file} --output {output_file}")
        return train, infer

    return build


@pytest.fixture
def line_scorer_cmd():
    script = HELPERS_DIR / "line_scorer.py"

    def build(mode: str = "len") -> str:
        return f"{sys.executable} {script} {mode}"

    return build
