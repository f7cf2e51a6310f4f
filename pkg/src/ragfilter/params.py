"""Parameter records for the merge engine and the denoiser."""
from __future__ import annotations

from dataclasses import dataclass

from .validation import check_fraction, check_positive

THRESHOLD_FORMS = ("t1", "t2")


@dataclass(frozen=True)
class FilterParams:
    """Settings for graph-driven filtering.

    target_resolution   virtual resolution the merge loop stops at (r*)
    dr                  per-step resolution decrement
    d0                  smallest color distance perceived at full resolution
    alpha, beta         logistic size-adjustment shape parameters
    threshold_form      "t1" (d0 / r) or "t2" (linear ramp, floor r_m)
    r_m                 resolution floor of the t2 ramp
    """

    target_resolution: float = 0.6
    dr: float = 0.1
    d0: float = 0.03
    alpha: float = 0.04
    beta: float = 10.0
    threshold_form: str = "t2"
    r_m: float = 0.1

    def validate(self) -> "FilterParams":
        check_fraction(self.target_resolution, "target_resolution")
        check_fraction(self.dr, "dr", closed_right=True)
        if self.dr > 1.0 - self.target_resolution + 1e-12:
            raise ValueError(
                f"dr={self.dr!r} exceeds 1 - target_resolution="
                f"{1.0 - self.target_resolution!r}: no step would fit")
        check_positive(self.d0, "d0")
        check_positive(self.alpha, "alpha")
        if self.beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        if self.threshold_form not in THRESHOLD_FORMS:
            raise ValueError(
                f"threshold_form must be one of {THRESHOLD_FORMS}, got {self.threshold_form!r}")
        if self.threshold_form == "t2":
            check_fraction(self.r_m, "r_m")
            if self.target_resolution < self.r_m:
                raise ValueError(
                    f"target_resolution={self.target_resolution!r} below the t2 "
                    f"ramp floor r_m={self.r_m!r}")
        return self


@dataclass(frozen=True)
class DenoiseParams:
    """Settings for the variational pre-processor.

    lam            weight of the quadratic fidelity term
    sigmoid_alpha  sharpness of the sigmoid edge surrogate (>> 1)
    step_size      gradient-descent step
    max_iters      number of descent steps
    tv_weight      weight of the anisotropic total-variation term
    surf_weight    weight of the sigmoid surface term
    """

    lam: float = 1.0
    sigmoid_alpha: float = 50.0
    step_size: float = 1e-5
    max_iters: int = 200
    tv_weight: float = 1.0
    surf_weight: float = 1.0

    def validate(self) -> "DenoiseParams":
        if self.lam < 0.0:
            raise ValueError(f"lam must be >= 0, got {self.lam!r}")
        check_positive(self.sigmoid_alpha, "sigmoid_alpha")
        check_positive(self.step_size, "step_size")
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ValueError(f"max_iters must be a non-negative integer, got {self.max_iters!r}")
        if self.tv_weight < 0.0 or self.surf_weight < 0.0:
            raise ValueError("tv_weight and surf_weight must be >= 0")
        return self
