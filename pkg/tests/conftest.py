import pytest

from ffsimplex.ffield import field_of_order


@pytest.fixture(params=[3, 5, 7, 9, 25, 27])
def fq(request):
    return field_of_order(request.param)
