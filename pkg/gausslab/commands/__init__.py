from . import polynomial_commands
from . import geometry_commands
from . import check_commands
from . import example_commands
from . import sweep_commands
