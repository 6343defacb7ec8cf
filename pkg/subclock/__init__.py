from . import docs


__doc__ = f"""
Multiply subordinated Levy models of asset returns\n
{docs.subclock}\n
{docs.cli}\n
{docs.config}\n
"""
