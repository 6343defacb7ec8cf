from .subordinators import *
from .compound import *
from .logprice import *
