"""Estimator-style entry points, sklearn flavored.

Both transformers are stateless per image: fit only validates parameters, and
transform runs the actual computation, stashing side products (graph, reports,
loss history) on underscore attributes for inspection.  They compose in a
Pipeline, e.g. make_pipeline(TVDenoiser(), GraphFilter()).
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .denoise import denoise
from .merging import filter_image
from .params import DenoiseParams, FilterParams
from .validation import check_image


class GraphFilter(BaseEstimator, TransformerMixin):
    """Texture-suppressing filter driven by iterative region merging.

    Parameters
    ----------
    target_resolution : float, default 0.6
        Virtual resolution the merge loop stops at.
    dr : float, default 0.1
        Per-step resolution decrement.
    d0 : float, default 0.03
        Smallest color distance perceived at full resolution.
    alpha, beta : float
        Shape of the logistic size adjustment.
    threshold_form : {"t1", "t2"}, default "t2"
    r_m : float, default 0.1
        Ramp floor of the t2 threshold.

    Attributes
    ----------
    graph_ : RegionGraph from the last transform
    labels_ : (H, W) node id per pixel from the last transform
    reports_ : list of MergeStepReport from the last transform
    node_count_ : nodes remaining after the last transform
    """

    def __init__(self, target_resolution=0.6, dr=0.1, d0=0.03, alpha=0.04,
                 beta=10.0, threshold_form="t2", r_m=0.1):
        self.target_resolution = target_resolution
        self.dr = dr
        self.d0 = d0
        self.alpha = alpha
        self.beta = beta
        self.threshold_form = threshold_form
        self.r_m = r_m

    def _filter_params(self) -> FilterParams:
        return FilterParams(
            target_resolution=self.target_resolution,
            dr=self.dr,
            d0=self.d0,
            alpha=self.alpha,
            beta=self.beta,
            threshold_form=self.threshold_form,
            r_m=self.r_m,
        ).validate()

    def fit(self, X=None, y=None):
        self._filter_params()
        return self

    def transform(self, X):
        """Filter one (H, W, 3) image; returns the filtered float64 image."""
        result = filter_image(check_image(X), self._filter_params())
        self.graph_ = result.graph
        self.labels_ = result.graph.labels
        self.reports_ = result.reports
        self.node_count_ = result.graph.node_count
        return result.image


class TVDenoiser(BaseEstimator, TransformerMixin):
    """Gradient-descent smoother combining TV, a sigmoid edge surrogate, and
    a quadratic fidelity term.

    Attributes
    ----------
    loss_history_ : per-iteration objective values from the last transform
    increased_steps_ : indices of steps whose loss rose (step size too big)
    """

    def __init__(self, lam=1.0, sigmoid_alpha=50.0, step_size=1e-5,
                 max_iters=200, tv_weight=1.0, surf_weight=1.0):
        self.lam = lam
        self.sigmoid_alpha = sigmoid_alpha
        self.step_size = step_size
        self.max_iters = max_iters
        self.tv_weight = tv_weight
        self.surf_weight = surf_weight

    def _denoise_params(self) -> DenoiseParams:
        return DenoiseParams(
            lam=self.lam,
            sigmoid_alpha=self.sigmoid_alpha,
            step_size=self.step_size,
            max_iters=self.max_iters,
            tv_weight=self.tv_weight,
            surf_weight=self.surf_weight,
        ).validate()

    def fit(self, X=None, y=None):
        self._denoise_params()
        return self

    def transform(self, X):
        """Denoise one (H, W, 3) image; returns the smoothed float64 image."""
        result = denoise(check_image(X), self._denoise_params())
        self.loss_history_ = result.loss_history
        self.increased_steps_ = result.increased_steps
        return result.image
