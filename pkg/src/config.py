from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.rational import Rational

VERSION = "0.1.0"


class AnalysisSettings(BaseModel):
    """Knobs of a single analysis run"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    certify: bool = Field(
        True,
        description="Attach compatibility-equation certificates and boundary classes",
    )
    max_iters: int = Field(
        200,
        ge=1,
        description="Budget of a-updates (LP solves) in the strict certificate search",
    )
    min_step: Rational = Field(
        Fraction(1, 64),
        description="Finest multiplicative step 1+min_step tried by the a-search",
    )
    seed_denominator: int = Field(
        64,
        ge=1,
        description="Denominator bound when rationalizing floating eigenvector seeds",
    )

    @field_validator("min_step")
    @classmethod
    def _positive_step(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("min_step must be positive")
        return value


_settings = None


def get_settings() -> AnalysisSettings:
    """Get or create the default settings"""
    global _settings
    if _settings is None:
        _settings = AnalysisSettings()
    return _settings
