"""Workflow-to-LTL compiler and bounded satisfiability checker."""

from importlib import resources

__version__ = "0.1.0"


def case_study_path():
    """Filesystem path of the bundled order-processing case study."""
    return resources.files("wfltl").joinpath("data/case_study.wf")
