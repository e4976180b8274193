# coding=utf-8
"""Random instance generation, caching and serialization."""

from .instances import DCT
from .instances import FAMILIES
from .instances import GAUSSIAN
from .instances import Instance
from .instances import InstanceSpec
from .instances import adjacent_column_correlation
from .instances import dct_matrix
from .instances import gen_dct
from .instances import gen_gaussian
from .instances import generate_instance

from .serialization import instance_from_bytes
from .serialization import instance_to_bytes
from .serialization import load_instance
from .serialization import save_instance
