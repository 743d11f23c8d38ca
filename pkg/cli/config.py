"""Validated command configuration."""
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from variance import CIMode, Flavor, StudentDf


Command = Literal["estimate", "simulate", "dump-dgp", "verify", "runs"]


class RunConfig(BaseModel):
    """Everything one CLI invocation needs; built from flags over settings."""
    command: Command

    # estimate
    input: Optional[str] = None
    y_col: str = "y"
    t_col: str = "t"
    z_cols: Optional[List[str]] = None

    # simulate / dump-dgp
    scheme: int = Field(default=1, ge=1, le=4)
    variant: int = Field(default=1, ge=1, le=3)
    n: int = Field(default=24, ge=4)
    n_treated: Optional[int] = None
    leverage_intercept: bool = False
    mode: Literal["exact", "mc"] = "exact"
    reps: Optional[int] = None
    seed: Optional[int] = None
    threads: Optional[int] = None
    budget: Optional[int] = None
    skip_singular: bool = False
    dump_assignments: Optional[str] = None
    table: Literal["main", "ci"] = "main"
    compare: bool = False

    # inference
    flavors: List[Flavor] = Field(default_factory=lambda: [Flavor.BC_HC2])
    ci: List[CIMode] = Field(default_factory=lambda: [CIMode.SATTERTHWAITE])
    level: Optional[float] = None
    t_df: Optional[StudentDf] = None

    # output
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"

    # verify
    sizes: List[int] = Field(default_factory=lambda: [8, 10, 12])
    fault: Optional[str] = None

    # runs
    clear: bool = False
    limit: int = 20

    @model_validator(mode="after")
    def check_mode(self):
        if self.command == "estimate" and not self.input:
            raise ValueError("estimate needs an input CSV path")
        if self.command in ("simulate", "dump-dgp"):
            n_treated = self.treated_count
            if n_treated < 2 or self.n - n_treated < 2:
                raise ValueError(f"n_treated={n_treated} leaves an arm with fewer than 2 units")
        if self.command == "simulate":
            if self.mode == "mc" and (self.reps is None or self.seed is None):
                raise ValueError("mc mode requires --reps and --seed")
            if self.mode == "mc" and self.reps < 2:
                raise ValueError("mc mode requires at least 2 reps")
            if self.mode == "exact" and (self.reps is not None or self.seed is not None):
                raise ValueError("exact mode takes neither --reps nor --seed")
        if not self.flavors:
            raise ValueError("at least one variance flavor is required")
        if not self.ci:
            raise ValueError("at least one interval mode is required")
        return self

    @property
    def treated_count(self) -> int:
        return self.n_treated if self.n_treated is not None else self.n // 3
