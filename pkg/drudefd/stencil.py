"""Staggered difference operators with periodic wrap.

The forward operator ``F`` maps values on a primal axis to the dual axis and
the dual operator ``F*`` maps them back::

    order 2:  (F u)[l+1/2] = (u[l+1] - u[l]) / h
    order 4:  (F u)[l+1/2] = 9/8 (u[l+1] - u[l]) / h - 1/24 (u[l+2] - u[l-1]) / h

Indices wrap modulo ``M``. Under this wrap ``-F*`` is the adjoint of ``F`` for
the discrete scalar products of :mod:`drudefd.grid`.

Curls are built from these operators. In 2D (TE) the electric components live
on ``Ex: (dual, primal)`` and ``Ey: (primal, dual)`` and the auxiliary field on
``(dual, dual)``. In 3D the forward curl maps edge fields
``(dpp, pdp, ppd)`` to face fields ``(pdd, dpd, ddp)`` and the dual curl maps
them back.
"""

from typing import Callable, Iterable, NamedTuple, Sequence, Tuple

import numpy as np

ORDERS = (2, 4)
FORWARD = 'forward'
DUAL_KIND = 'dual'
CURL_KINDS = (FORWARD, DUAL_KIND)

C1 = 9.0 / 8.0
C3 = 1.0 / 24.0


def check_order(order: int) -> int:
    if order not in ORDERS:
        raise ValueError('difference order must be 2 or 4: {}'.format(order))
    return order


def _check_axis(u: 'GridFunction', axis: int, tag: str, name: str) -> None:
    if not 0 <= axis < u.mesh.d:
        raise StaggerError('{} on axis {} of a {}D field'
            .format(name, axis, u.mesh.d))
    if u.stagger[axis] != tag:
        raise StaggerError(
            '{} needs a field {} on axis {}, got stagger {}'.format(
                name, 'primal' if tag == PRIMAL else 'dual', axis, u.stagger
            )
        )


def diff_fwd(u: 'GridFunction', axis: int=0, order: int=4) -> 'GridFunction':
    """Apply the forward difference operator ``F`` along ``axis``.

    Args:
        u (GridFunction): a field primal on ``axis``.
        axis (int, optional): the axis to differentiate along.
        order (int, optional): 2 or 4.

    Raises:
        StaggerError: if ``u`` is not primal on ``axis``.

    Returns:
        GridFunction: the difference, dual on ``axis`` and unchanged on the
        other axes.
    """
    check_order(order)
    _check_axis(u, axis, PRIMAL, 'diff_fwd')
    a = u.values
    if order == 2:
        out = np.roll(a, -1, axis) - a
    else:
        out = (
            C1 * (np.roll(a, -1, axis) - a)
            - C3 * (np.roll(a, -2, axis) - np.roll(a, 1, axis))
        )
    out /= u.mesh.h
    return GridFunction.wrap(u.mesh, u.stagger.flip(axis), out)


def diff_dual(u: 'GridFunction', axis: int=0, order: int=4) -> 'GridFunction':
    """Apply the dual difference operator ``F*`` along ``axis``.

    Args:
        u (GridFunction): a field dual on ``axis``.
        axis (int, optional): the axis to differentiate along.
        order (int, optional): 2 or 4.

    Raises:
        StaggerError: if ``u`` is not dual on ``axis``.

    Returns:
        GridFunction: the difference, primal on ``axis``.
    """
    check_order(order)
    _check_axis(u, axis, DUAL, 'diff_dual')
    a = u.values
    if order == 2:
        out = a - np.roll(a, 1, axis)
    else:
        out = (
            C1 * (a - np.roll(a, 1, axis))
            - C3 * (np.roll(a, -1, axis) - np.roll(a, 2, axis))
        )
    out /= u.mesh.h
    return GridFunction.wrap(u.mesh, u.stagger.flip(axis), out)


def average_to_centres(u: 'GridFunction') -> 'GridFunction':
    """Move a field to the cell centres (dual on every axis) by averaging the
    two neighbours along each primal axis, ``(u[l] + u[l+1]) / 2``.

    Second order accurate. A field that is already dual everywhere is
    returned unchanged.
    """
    a = u.values
    stagger = u.stagger
    for axis, tag in enumerate(u.stagger):
        if tag == PRIMAL:
            a = 0.5 * (a + np.roll(a, -1, axis))
            stagger = stagger.flip(axis)
    if stagger == u.stagger:
        return u
    return GridFunction.wrap(u.mesh, stagger, a)


def _diff(kind: str) -> Callable:
    if kind == FORWARD:
        return diff_fwd
    if kind == DUAL_KIND:
        return diff_dual
    raise ValueError('curl kind must be one of {}: {}'.format(CURL_KINDS, kind))


def _check_dim(fields: Sequence['GridFunction'], d: int, name: str) -> None:
    for f in fields:
        if f.mesh.d != d:
            raise StaggerError('{} needs {}D fields, got a {}D field'
                .format(name, d, f.mesh.d))


def curl_2d_scalar(
    E: Sequence['GridFunction'], order: int=4, kind: str=FORWARD
) -> 'GridFunction':
    """Scalar curl ``D_x Ey - D_y Ex`` of an in-plane vector field.

    With ``kind='forward'`` the operators are ``F`` and the components must be
    ``Ex: (dual, primal)``, ``Ey: (primal, dual)``; the result is on
    ``(dual, dual)``. With ``kind='dual'`` the operators are ``F*``, the
    components ``Ex: (primal, dual)``, ``Ey: (dual, primal)`` and the result
    is on ``(primal, primal)``.

    Args:
        E (sequence): the pair ``(Ex, Ey)``.
        order (int, optional): 2 or 4.
        kind (str, optional): ``'forward'`` or ``'dual'``.

    Raises:
        StaggerError: if the components are not on the grids above.

    Returns:
        GridFunction: the scalar curl.
    """
    Ex, Ey = E
    _check_dim((Ex, Ey), 2, 'curl_2d_scalar')
    diff = _diff(kind)
    return diff(Ey, 0, order) - diff(Ex, 1, order)


def curl_2d_vector(
    K: 'GridFunction', order: int=4, kind: str=DUAL_KIND
) -> Tuple['GridFunction', 'GridFunction']:
    """Vector curl ``(D_y K, -D_x K)`` of an out-of-plane scalar field.

    The default ``kind='dual'`` uses ``F*`` and takes ``K`` on
    ``(dual, dual)`` back to the electric grids ``(dual, primal)`` and
    ``(primal, dual)``. It is the adjoint of the forward
    :func:`curl_2d_scalar`::

        <curl_2d_scalar(E), K> = <E, curl_2d_vector(K)>

    With ``kind='forward'`` ``K`` must be on ``(primal, primal)``.

    Returns:
        tuple: the pair of components.
    """
    _check_dim((K,), 2, 'curl_2d_vector')
    diff = _diff(kind)
    return diff(K, 1, order), -diff(K, 0, order)


def curl_3d(
    V: Sequence['GridFunction'], kind: str=FORWARD, order: int=4
) -> Tuple['GridFunction', 'GridFunction', 'GridFunction']:
    """Curl of a 3D vector field,
    ``(D_y Vz - D_z Vy, D_z Vx - D_x Vz, D_x Vy - D_y Vx)``.

    The forward kind uses ``F`` and maps the edge layout
    ``(dpp, pdp, ppd)`` to the face layout ``(pdd, dpd, ddp)``; the dual kind
    uses ``F*`` and maps faces to edges. The pair satisfies
    ``<curl_3d(V), U> = <V, curl_3d(U, 'dual')>``.

    Args:
        V (sequence): the three components.
        kind (str, optional): ``'forward'`` or ``'dual'``.
        order (int, optional): 2 or 4.

    Raises:
        StaggerError: if the components don't fit together.

    Returns:
        tuple: the three components of the curl.
    """
    Vx, Vy, Vz = V
    _check_dim((Vx, Vy, Vz), 3, 'curl_3d')
    diff = _diff(kind)
    return (
        diff(Vz, 1, order) - diff(Vy, 2, order),
        diff(Vx, 2, order) - diff(Vz, 0, order),
        diff(Vy, 0, order) - diff(Vx, 1, order),
    )


class StencilStep:
    """One link of an operator chain: a named map from a tuple of grid
    functions to a tuple of grid functions.

    Args:
        name (str): a label used in error messages and ``repr``.
        func (callable): the map, receiving and returning a tuple.
    """
    def __init__(self, name: str, func: Callable) -> None:
        self.name = name
        self.func = func

    def __call__(self, fields: Sequence['GridFunction']) -> tuple:
        return tuple(self.func(tuple(fields)))

    def __neg__(self) -> 'StencilStep':
        func = self.func
        name = self.name[1:] if self.name.startswith('-') else '-' + self.name
        return StencilStep(name, lambda fs: tuple(-f for f in func(fs)))

    def __repr__(self) -> str:
        return 'StencilStep({})'.format(self.name)


def step_fwd(axis: int=0, order: int=4) -> StencilStep:
    """Chain step applying :func:`diff_fwd` to every field."""
    check_order(order)
    return StencilStep(
        'F{}[{}]'.format(order, axis),
        lambda fs: [diff_fwd(f, axis, order) for f in fs]
    )


def step_dual(axis: int=0, order: int=4) -> StencilStep:
    """Chain step applying :func:`diff_dual` to every field."""
    check_order(order)
    return StencilStep(
        'F{}*[{}]'.format(order, axis),
        lambda fs: [diff_dual(f, axis, order) for f in fs]
    )


def step_curl(kind: str=FORWARD, order: int=4) -> StencilStep:
    """Chain step applying the curl that fits its input: the vector curl to
    one 2D field, the scalar curl to two 2D fields and the 3D curl to three 3D
    fields."""
    check_order(order)
    _diff(kind)

    def func(fs):
        if len(fs) == 1 and fs[0].mesh.d == 2:
            return curl_2d_vector(fs[0], order, kind)
        if len(fs) == 2:
            return (curl_2d_scalar(fs, order, kind),)
        if len(fs) == 3:
            return curl_3d(fs, kind, order)
        raise StaggerError('no curl for {} fields of dimension {}'
            .format(len(fs), fs[0].mesh.d if fs else '?'))

    return StencilStep('curl{}{}'.format(order, '' if kind == FORWARD else '*'),
        func)


class Composition:
    """A chain of stencil steps applied left to right, matrix free.

    The chain is checked when it is built: it is run once on zero fields with
    the ``source`` staggers on a small 4-cell mesh, so a chain whose staggers
    don't connect fails here and not in the middle of a simulation. An empty
    chain is the identity.

    Args:
        steps (iterable): the :class:`StencilStep` links, first applied first.
        source (sequence): the stagger of every input field.

    Raises:
        StaggerError: if the chain is inconsistent for ``source``.
    """
    def __init__(
        self, steps: Iterable[StencilStep], source: Sequence['Stagger']
    ) -> None:
        self.steps = tuple(steps)
        self.source = tuple(
            s if isinstance(s, Stagger) else Stagger(*s) for s in source
        )
        if not self.source:
            raise StaggerError('a composition needs at least one input field')
        dims = set(len(s) for s in self.source)
        if len(dims) != 1:
            raise StaggerError('input staggers of mixed dimension: {}'
                .format([str(s) for s in self.source]))
        trial_mesh = MeshSpec(1.0, 4, dims.pop())
        zeros = tuple(GridFunction.zeros(trial_mesh, s) for s in self.source)
        try:
            out = self._run(zeros)
        except StaggerError as e:
            raise StaggerError('inconsistent chain {}: {}'
                .format(self.describe(), e)) from e
        self.target = tuple(f.stagger for f in out)

    def _run(self, fields: tuple) -> tuple:
        for step in self.steps:
            fields = step(fields)
        return fields

    def __call__(self, fields: Sequence['GridFunction']) -> tuple:
        fields = tuple(fields)
        staggers = tuple(f.stagger for f in fields)
        if staggers != self.source:
            raise StaggerError('chain {} expects staggers {}, got {}'.format(
                self.describe(), [str(s) for s in self.source],
                [str(s) for s in staggers]
            ))
        return self._run(fields)

    def __len__(self) -> int:
        return len(self.steps)

    def describe(self) -> str:
        return ' -> '.join(s.name for s in self.steps) or 'identity'

    def __repr__(self) -> str:
        return 'Composition({})'.format(self.describe())


def apply_composition(
    chain: Composition, bundle: 'FieldBundle', names: Sequence[str]=None
) -> 'FieldBundle':
    """Apply an operator chain to the fields of a bundle.

    Args:
        chain (Composition): the chain.
        bundle (FieldBundle): the input, in the order of ``chain.source``.
        names (sequence, optional): names of the output fields. By default the
            input names are kept when the number of fields doesn't change, and
            the outputs are named ``u0``, ``u1``, ... otherwise.

    Returns:
        FieldBundle: the result.
    """
    out = chain(bundle.values())
    if names is None:
        names = bundle.names if len(out) == len(bundle) else tuple(
            'u{}'.format(i) for i in range(len(out))
        )
    if len(names) != len(out):
        raise StaggerError('{} names for {} output fields'
            .format(len(names), len(out)))
    return FieldBundle(zip(names, out))


class CurlPair(NamedTuple):
    """The discrete curl ``C`` of a dimension and its adjoint ``C*``.

    ``curl`` maps the electric-type fields (on ``electric``) to the auxiliary
    grid (``auxiliary``) and ``adjoint`` maps back, with
    ``<C u, v> = <u, C* v>``. In 1D ``C = F`` and ``C* = -F*``; in 2D ``C`` is
    the forward scalar curl and ``C*`` the dual vector curl.
    """
    dim: int
    order: int
    curl: StencilStep
    adjoint: StencilStep
    electric: Tuple['Stagger', ...]
    auxiliary: Tuple['Stagger', ...]

    def chain(self, *names: str) -> Composition:
        """Build the composition of ``'C'`` and ``'C*'`` links given in
        application order, starting from the grid the first link reads."""
        steps = [self.curl if n == 'C' else self.adjoint for n in names]
        if not names or names[0] == 'C':
            source = self.electric
        else:
            source = self.auxiliary
        return Composition(steps, source)


def curl_pair(dim: int, order: int=4) -> CurlPair:
    """Function to build the :class:`CurlPair` of a dimension.

    Args:
        dim (int): 1 or 2.
        order (int, optional): 2 or 4.

    Returns:
        CurlPair: the pair.
    """
    check_order(order)
    if dim == 1:
        return CurlPair(
            1, order, step_fwd(0, order), -step_dual(0, order),
            (Stagger(PRIMAL),), (Stagger(DUAL),)
        )
    if dim == 2:
        return CurlPair(
            2, order, step_curl(FORWARD, order), step_curl(DUAL_KIND, order),
            (Stagger(DUAL, PRIMAL), Stagger(PRIMAL, DUAL)),
            (Stagger(DUAL, DUAL),)
        )
    raise ValueError('curl pairs exist for dimensions 1 and 2: {}'.format(dim))

from .errors import StaggerError
from .grid import (
    DUAL, PRIMAL, FieldBundle, GridFunction, MeshSpec, Stagger
)
