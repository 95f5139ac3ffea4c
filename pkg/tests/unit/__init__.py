# This file makes Python treat the 'unit' directory as a package.
