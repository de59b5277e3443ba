"""Compensated (Kahan-Babuska / Neumaier) summation.

Works for float and complex alike; complex compensation is applied
componentwise through ordinary complex arithmetic.
"""


class KahanSum:
    """Running compensated sum. `add` values, read `.value`."""

    __slots__ = ("_s", "_c")

    def __init__(self, start=0.0):
        self._s = start
        self._c = start * 0

    def add(self, v):
        t = self._s + v
        if abs(self._s) >= abs(v):
            self._c += (self._s - t) + v
        else:
            self._c += (v - t) + self._s
        self._s = t

    @property
    def value(self):
        return self._s + self._c

    def __iadd__(self, v):
        self.add(v)
        return self


def kahan_sum(values):
    acc = KahanSum()
    for v in values:
        acc.add(v)
    return acc.value
