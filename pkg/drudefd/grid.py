import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Tuple, Union

import numpy as np

PRIMAL = 'p'
DUAL = 'd'

Number = Union[int, float]


@dataclass(frozen=True)
class MeshSpec:
    """A uniform periodic mesh on the box ``[0, L]^d``.

    Every axis has ``M`` cells and step ``h = L / M``. Primal nodes sit at
    ``l * h`` and dual nodes at ``(l + 1/2) * h``, ``l = 0, ..., M - 1``; the
    primal node ``M`` is identified with node ``0``.

    Args:
        L (float): the edge length of the box.
        M (int): the number of cells per axis. The fourth order stencils reach
            two cells away, so ``M`` must be at least 4.
        d (int, optional): the spatial dimension, 1, 2 or 3. Defaults to 1.

    Raises:
        StaggerError: if any of the arguments is out of range.
    """
    L: float
    M: int
    d: int = 1

    def __post_init__(self) -> None:
        if self.d not in (1, 2, 3):
            raise StaggerError('mesh dimension must be 1, 2 or 3: {}'
                .format(self.d))
        if int(self.M) != self.M or self.M < 4:
            raise StaggerError('mesh needs an integer M >= 4 cells per axis: {}'
                .format(self.M))
        if not self.L > 0:
            raise StaggerError('mesh length must be positive: {}'
                .format(self.L))

    @property
    def h(self) -> float:
        """float: the mesh step ``L / M``."""
        return self.L / self.M

    @property
    def shape(self) -> Tuple[int, ...]:
        """tuple: the extent of a grid function on this mesh."""
        return (self.M,) * self.d

    @property
    def measure(self) -> float:
        """float: the cell measure ``h^d`` used by the discrete inner
        products."""
        return self.h ** self.d


class Stagger(tuple):
    """A tuple of per-axis tags, ``'p'`` (primal) or ``'d'`` (dual), telling on
    which grid a field component lives.

    A stagger can be built from separate tags or from a string, so
    ``Stagger('d', 'p')`` and ``Stagger('dp')`` are the same.
    """
    def __new__(cls, *tags: str) -> 'Stagger':
        if len(tags) == 1 and len(tags[0]) > 1:
            tags = tuple(tags[0])
        for tag in tags:
            if tag not in (PRIMAL, DUAL):
                raise StaggerError(
                    'stagger tags must be "{}" or "{}": {}'
                    .format(PRIMAL, DUAL, tag)
                )
        return tuple.__new__(cls, tags)

    @classmethod
    def primal(cls, d: int) -> 'Stagger':
        return cls(*(PRIMAL,) * d)

    @classmethod
    def dual(cls, d: int) -> 'Stagger':
        return cls(*(DUAL,) * d)

    def flip(self, axis: int) -> 'Stagger':
        """Method to get the stagger obtained by moving this one from primal to
        dual (or the other way around) along ``axis``.

        Args:
            axis (int): the axis to flip.

        Returns:
            Stagger: the flipped stagger.
        """
        tags = list(self)
        tags[axis] = DUAL if tags[axis] == PRIMAL else PRIMAL
        return Stagger(*tags)

    def coordinates(self, mesh: MeshSpec) -> list:
        """Method to get the 1D node coordinates of every axis.

        Args:
            mesh (MeshSpec): the mesh.

        Returns:
            list: one ``numpy`` array of ``M`` coordinates per axis.
        """
        index = np.arange(mesh.M, dtype=np.float64)
        return [
            (index + (0.5 if tag == DUAL else 0.0)) * mesh.h for tag in self
        ]

    def __str__(self) -> str:
        return ''.join(self)

    def __repr__(self) -> str:
        return 'Stagger({!r})'.format(str(self))


class GridFunction:
    """The values of one field component on one staggered grid.

    ``values`` is a ``d``-dimensional array of 64-bit floats with extent ``M``
    on every axis. Grid functions are treated as immutable values: every
    operation returns a new one, and the array they hold is made read-only.

    Grid functions support ``+``, ``-`` and unary ``-`` between grid functions
    on the same mesh and stagger, and ``*`` and ``/`` by real numbers.

    Args:
        mesh (MeshSpec): the mesh.
        stagger (Stagger, str): the per-axis grid tags.
        values (array-like): the values.

    Raises:
        StaggerError: if the stagger doesn't have ``d`` tags, or the values
            don't have the extent of the mesh.
    """
    __slots__ = ('mesh', 'stagger', 'values')

    def __init__(
        self, mesh: MeshSpec, stagger: Union[Stagger, str], values: Iterable
    ) -> None:
        if not isinstance(stagger, Stagger):
            stagger = Stagger(*stagger)
        if len(stagger) != mesh.d:
            raise StaggerError(
                'a {}D field needs {} stagger tags: {}'
                .format(mesh.d, mesh.d, stagger)
            )
        values = np.array(values, dtype=np.float64)
        if values.shape != mesh.shape:
            raise StaggerError(
                'values of shape {} do not fit a mesh of shape {}'
                .format(values.shape, mesh.shape)
            )
        values.flags.writeable = False
        self.mesh = mesh
        self.stagger = stagger
        self.values = values

    @classmethod
    def wrap(
        cls, mesh: MeshSpec, stagger: Stagger, values: np.ndarray
    ) -> 'GridFunction':
        """Build a grid function around a fresh ``float64`` array without
        copying or checking it. Used by the stencil kernels."""
        obj = cls.__new__(cls)
        values.flags.writeable = False
        obj.mesh = mesh
        obj.stagger = stagger
        obj.values = values
        return obj

    @classmethod
    def zeros(
        cls, mesh: MeshSpec, stagger: Union[Stagger, str]
    ) -> 'GridFunction':
        return cls(mesh, stagger, np.zeros(mesh.shape))

    def like(self, values: np.ndarray) -> 'GridFunction':
        """Method to get a grid function with the mesh and stagger of this one
        and the values passed."""
        return GridFunction.wrap(self.mesh, self.stagger, values)

    def check_compatible(self, other: 'GridFunction') -> None:
        """Method to check that ``other`` lives on the same mesh and grid as
        this grid function.

        Raises:
            StaggerError: if meshes or staggers are different.
        """
        if not isinstance(other, GridFunction):
            raise StaggerError('expected a GridFunction, got {}'
                .format(type(other).__name__))
        if other.mesh != self.mesh:
            raise StaggerError('mesh mismatch: {} and {}'
                .format(self.mesh, other.mesh))
        if other.stagger != self.stagger:
            raise StaggerError('stagger mismatch: {} and {}'
                .format(self.stagger, other.stagger))

    def max_abs(self) -> float:
        """float: the maximum absolute value."""
        return float(np.max(np.abs(self.values)))

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def __add__(self, other: 'GridFunction') -> 'GridFunction':
        self.check_compatible(other)
        return self.like(self.values + other.values)

    def __sub__(self, other: 'GridFunction') -> 'GridFunction':
        self.check_compatible(other)
        return self.like(self.values - other.values)

    def __neg__(self) -> 'GridFunction':
        return self.like(-self.values)

    def __mul__(self, scalar: Number) -> 'GridFunction':
        if isinstance(scalar, GridFunction):
            return NotImplemented
        return self.like(self.values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number) -> 'GridFunction':
        return self.like(self.values / scalar)

    def __repr__(self) -> str:
        return 'GridFunction(M={}, d={}, stagger={})'.format(
            self.mesh.M, self.mesh.d, self.stagger
        )


def sample(
    f: Callable, mesh: MeshSpec, stagger: Union[Stagger, str]
) -> GridFunction:
    """Function to sample ``f`` at the nodes of a staggered grid.

    ``f`` is called once with one coordinate array per axis (broadcast with
    ``indexing='ij'``), so it must be vectorized, like the closures in
    :mod:`drudefd.model`. A function returning a scalar gives a constant grid
    function.

    Args:
        f (callable): the function of position to sample.
        mesh (MeshSpec): the mesh.
        stagger (Stagger, str): the grid to sample on.

    Returns:
        GridFunction: the values of ``f`` at the grid nodes.
    """
    if not isinstance(stagger, Stagger):
        stagger = Stagger(*stagger)
    if len(stagger) != mesh.d:
        raise StaggerError('a {}D field needs {} stagger tags: {}'
            .format(mesh.d, mesh.d, stagger))
    coords = np.meshgrid(*stagger.coordinates(mesh), indexing='ij')
    values = np.asarray(f(*coords), dtype=np.float64)
    values = np.broadcast_to(values, mesh.shape).copy()
    return GridFunction.wrap(mesh, stagger, values)


def inner(u: GridFunction, v: GridFunction) -> float:
    """Function to compute the discrete scalar product
    ``h^d * sum(u_l * v_l)``.

    Args:
        u (GridFunction): first grid function.
        v (GridFunction): second grid function, on the same grid as ``u``.

    Raises:
        StaggerError: if ``u`` and ``v`` are on different meshes or grids.

    Returns:
        float: the scalar product.
    """
    u.check_compatible(v)
    return u.mesh.measure * float(np.sum(u.values * v.values))


def norm(u: GridFunction) -> float:
    """Function to compute the discrete norm, the square root of
    :func:`inner` ``(u, u)``."""
    return math.sqrt(inner(u, u))


class FieldBundle:
    """An ordered collection of named grid functions, like the pair ``(E, K)``
    of a 1D simulation or the triple ``(Ex, Ey, K)`` of a 2D one.

    A bundle behaves like a read-only ``dict`` (get by name, iterate names,
    ``len``), and supports ``+``, ``-`` and unary ``-`` with a bundle of the
    same layout, and ``*`` by real numbers.

    Args:
        fields (Mapping, iterable): the named grid functions, as a mapping or
            an iterable of ``(name, GridFunction)`` pairs.
    """
    __slots__ = ('_fields',)

    def __init__(
        self, fields: Union[Mapping[str, GridFunction], Iterable] = ()
    ) -> None:
        items = fields.items() if isinstance(fields, Mapping) else fields
        self._fields = {}
        for name, gf in items:
            if not isinstance(gf, GridFunction):
                raise StaggerError('bundle field "{}" is not a GridFunction'
                    .format(name))
            self._fields[name] = gf

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self._fields)

    def __getitem__(self, name: str) -> GridFunction:
        return self._fields[name]

    def __contains__(self, name: str) -> bool:
        return name in self._fields

    def __iter__(self) -> Iterator[str]:
        return iter(self._fields)

    def __len__(self) -> int:
        return len(self._fields)

    def items(self):
        return self._fields.items()

    def values(self):
        return self._fields.values()

    def replace(self, **fields: GridFunction) -> 'FieldBundle':
        """Method to get a copy of this bundle with some fields replaced."""
        new = dict(self._fields)
        for name, gf in fields.items():
            if name not in new:
                raise StaggerError('bundle has no field "{}"'.format(name))
            new[name] = gf
        return FieldBundle(new)

    def check_compatible(self, other: 'FieldBundle') -> None:
        if not isinstance(other, FieldBundle) or other.names != self.names:
            raise StaggerError('bundle layout mismatch: {} and {}'.format(
                self.names, getattr(other, 'names', type(other).__name__)
            ))
        for name in self.names:
            self[name].check_compatible(other[name])

    def is_finite(self) -> bool:
        return all(gf.is_finite() for gf in self.values())

    def _map2(self, other: 'FieldBundle', op: Callable) -> 'FieldBundle':
        self.check_compatible(other)
        return FieldBundle(
            (name, op(gf, other[name])) for name, gf in self.items()
        )

    def __add__(self, other: 'FieldBundle') -> 'FieldBundle':
        return self._map2(other, lambda a, b: a + b)

    def __sub__(self, other: 'FieldBundle') -> 'FieldBundle':
        return self._map2(other, lambda a, b: a - b)

    def __neg__(self) -> 'FieldBundle':
        return FieldBundle((name, -gf) for name, gf in self.items())

    def __mul__(self, scalar: Number) -> 'FieldBundle':
        if isinstance(scalar, FieldBundle):
            return NotImplemented
        return FieldBundle((name, gf * scalar) for name, gf in self.items())

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return 'FieldBundle({})'.format(
            ', '.join('{}={}'.format(k, v.stagger) for k, v in self.items())
        )


def inner_bundle(a: FieldBundle, b: FieldBundle) -> float:
    """Function to compute the bundle scalar product ``<a, b>_h``, the sum of
    the scalar products of the fields with the same name."""
    a.check_compatible(b)
    return sum(inner(a[name], b[name]) for name in a.names)


def norm_bundle(a: FieldBundle) -> float:
    return math.sqrt(inner_bundle(a, a))

from .errors import StaggerError
