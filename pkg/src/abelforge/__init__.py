"""abelforge: dissipative oscillators solved through their Abel equations.

The package tests whether an oscillator u'' + g(u) u' + h(u) = 0 admits a
Chiellini constant k with (h/g)' = k g, constructs explicit branch fields
eta(u) = du/dzeta when it does, and reconstructs trajectories u(zeta) by
quadrature inversion, cross-checked against an independent Runge-Kutta
integration and, for the catalog families, against closed forms.

Modules
-------
expr        parse/evaluate/differentiate the small coefficient DSL
quadrature  adaptive Gauss and tanh-sinh panels with roundoff-aware floors
special     elliptic integrals and Jacobi amplitude functions
abelcore    classification, Abel reductions, eta constructions
quadinvert  trajectory reconstruction: quadrature map, inversion, RK4
catalog     four worked oscillator families with closed-form oracles
cli         command-line front end (`abelforge ...`)
"""

from .abelcore import (
    AbelFirstKind,
    AbelSecondKind,
    AllPointsSingular,
    ChielliniReport,
    DissipativeOde,
    EmptyDomain,
    EtaField,
    NoRealRoot,
    abel_implicit_residual,
    antiderivative,
    ck_roots,
    classify_chiellini,
    eta_from_g,
    eta_from_h,
    eta_from_ratio,
    factorize,
    first_kind_cubic,
    reduce_to_abel,
    second_kind_residual,
    separated_antiderivative,
    to_first_kind,
)
from .catalog import CatalogEntry, build, burgers_huxley, fisher, names, pendulum, sine_pendulum
from .expr import DomainError, ParseError, ScalarField, UnknownFunctionError, UnknownIdentifierError
from .quadinvert import InteriorZero, SolutionCurve, invert, quadrature_map, rk4_reference
from .quadrature import QuadratureFailure, adaptive_gauss, tanh_sinh
from .special import elliptic_f, elliptic_reach, gudermann, jacobi_am, jacobi_sn_cn_dn

__version__ = "0.1.0"

__all__ = [
    "AbelFirstKind",
    "AbelSecondKind",
    "AllPointsSingular",
    "CatalogEntry",
    "ChielliniReport",
    "DissipativeOde",
    "DomainError",
    "EmptyDomain",
    "EtaField",
    "InteriorZero",
    "NoRealRoot",
    "ParseError",
    "QuadratureFailure",
    "ScalarField",
    "SolutionCurve",
    "UnknownFunctionError",
    "UnknownIdentifierError",
    "abel_implicit_residual",
    "adaptive_gauss",
    "antiderivative",
    "build",
    "burgers_huxley",
    "ck_roots",
    "classify_chiellini",
    "elliptic_f",
    "elliptic_reach",
    "eta_from_g",
    "eta_from_h",
    "eta_from_ratio",
    "factorize",
    "first_kind_cubic",
    "fisher",
    "gudermann",
    "invert",
    "jacobi_am",
    "jacobi_sn_cn_dn",
    "names",
    "pendulum",
    "quadrature_map",
    "reduce_to_abel",
    "rk4_reference",
    "second_kind_residual",
    "separated_antiderivative",
    "sine_pendulum",
    "tanh_sinh",
    "to_first_kind",
]
