"""Tests for settings and input document models."""

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from wronski.config import (
    DEFAULT_SETTINGS,
    BetheConfigModel,
    QuasiExpSpaceModel,
    Settings,
    StructuredParamsModel,
    load_settings,
)
from wronski.errors import CoincidentBasesError, KernelDeficiencyError, WronskiError


class TestSettings:
    """Tests for Settings loading."""

    def test_defaults(self) -> None:
        """No file gives the shared defaults."""
        settings = load_settings()
        assert settings is DEFAULT_SETTINGS
        assert settings.solver.starts == 200
        assert settings.tolerances.reality == 1e-8
        assert settings.duality.y_shift == 1

    def test_partial_file(self, tmp_path: Path) -> None:
        """A file may override any subset of fields."""
        path = tmp_path / "settings.json"
        path.write_text(json.dumps({"solver": {"starts": 10}}))
        settings = load_settings(path)
        assert settings.solver.starts == 10
        assert settings.solver.max_iterations == 80

    def test_frozen(self) -> None:
        """Settings cannot be mutated in place."""
        with pytest.raises(ValidationError):
            DEFAULT_SETTINGS.solver.starts = 1  # type: ignore[misc]

    def test_rejects_bad_values(self) -> None:
        """Tolerances must be positive."""
        with pytest.raises(ValidationError):
            Settings.model_validate({"tolerances": {"reality": 0}})


class TestInputModels:
    """Tests for the JSON input documents."""

    def test_bare_reals_become_pairs(self) -> None:
        """A real number stands for [re, 0]."""
        model = StructuredParamsModel.model_validate(
            {"kind": "z", "sites": [1, [0, 2]], "weights": [0.5, 0.0]}
        )
        assert model.sites == [(1.0, 0.0), (0.0, 2.0)]

    def test_lengths_must_match(self) -> None:
        """Sites and weights pair up."""
        with pytest.raises(ValidationError, match="equal length"):
            StructuredParamsModel.model_validate({"kind": "z", "sites": [1], "weights": []})

    def test_member_key_follows_mode(self) -> None:
        """Exponent mode members need an exponent."""
        with pytest.raises(ValidationError, match="needs 'exponent'"):
            QuasiExpSpaceModel.model_validate(
                {"mode": "exponent", "members": [{"base": 2, "poly": [1]}]}
            )

    def test_bethe_shapes(self) -> None:
        """z has n entries, Q has N, and s is at most n."""
        BetheConfigModel(N=2, n=2, z=[2.0, 0.0], Q=[1.0, 2.0], s=2)
        with pytest.raises(ValidationError, match="s must not exceed n"):
            BetheConfigModel(N=2, n=2, z=[2.0, 0.0], Q=[1.0, 2.0], s=3)


class TestErrors:
    """Tests for the exception hierarchy."""

    def test_all_are_value_errors(self) -> None:
        """Package errors are ValueErrors."""
        assert issubclass(WronskiError, ValueError)
        assert isinstance(CoincidentBasesError(0, 1), WronskiError)

    def test_kernel_deficiency_keeps_partial(self) -> None:
        """The members found so far travel with the error."""
        error = KernelDeficiencyError(["f"], 2)
        assert error.partial == ("f",)
        assert "found 1 of 2" in str(error)
