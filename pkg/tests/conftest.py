"""Shared pytest fixtures for heydecheck tests."""

from pathlib import Path

import pytest
from pyfakefs.fake_filesystem import FakeFilesystem

from heydecheck.models.groups import Host, PrimeProfile
from heydecheck.services.charfn import CharFnService
from heydecheck.services.constructions import ConstructionService
from heydecheck.services.finmodel import FiniteModelService
from heydecheck.services.serialization import JsonReportCodec
from heydecheck.services.verify import VerificationService

FIXTURES_DIR = Path(__file__).parent / "integration" / "fixtures"
FAKE_WORKDIR = Path("/fake/work")


@pytest.fixture
def _fs(fs: FakeFilesystem) -> FakeFilesystem:
    """Alias for fs fixture when pyfakefs is needed but not explicitly used."""
    return fs


@pytest.fixture
def workdir(fs: FakeFilesystem) -> Path:
    """Fake working directory with the JSON fixtures mapped in."""
    fs.create_dir(FAKE_WORKDIR)
    fs.add_real_directory(
        FIXTURES_DIR, target_path=FAKE_WORKDIR / "fixtures", read_only=True
    )
    return FAKE_WORKDIR


@pytest.fixture
def wide_profile() -> PrimeProfile:
    """Profile with 2, 3, 5 and 7 at infinite multiplicity."""
    return PrimeProfile.infinite([2, 3, 5, 7])


@pytest.fixture
def heyde_profile() -> PrimeProfile:
    """Smallest profile with f_2 and f_3 in Aut."""
    return PrimeProfile.infinite([2, 3])


@pytest.fixture
def prufer2() -> Host:
    return Host.prufer(2)


@pytest.fixture
def rationals() -> Host:
    """The universal dual group Q."""
    return Host.rational(PrimeProfile.universal())


@pytest.fixture
def charfn() -> CharFnService:
    return CharFnService()


@pytest.fixture
def verifier(charfn: CharFnService) -> VerificationService:
    return VerificationService(charfn)


@pytest.fixture
def constructions(charfn: CharFnService) -> ConstructionService:
    return ConstructionService(charfn)


@pytest.fixture
def finite(charfn: CharFnService, verifier: VerificationService) -> FiniteModelService:
    return FiniteModelService(charfn, verifier)


@pytest.fixture
def codec() -> JsonReportCodec:
    return JsonReportCodec()
