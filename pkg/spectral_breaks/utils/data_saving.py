""" Contains tools for saving structured results to hdf5 files.

Nested dictionaries and lists of numpy arrays and scalars can be saved and loaded back with the same structure.  This
is used to persist simulated reference distributions between runs.
"""

import os
import pathlib
from typing import Union

import h5py
import numpy as np

HDF5_TYPES = {'nparray': 'nparray',
              'scalar': 'scalar',
              'str': 'str',
              'dict': 'dict',
              'list': 'list'}


def save_structured_hdf5(o: Union[np.ndarray, list, dict, int, float, str], f: pathlib.Path, name: str,
                         overwrite: bool = False):
    """ Saves structured data to an hdf5 file.

    Args:
        o: The structured data to save, which can consist of nested dictionaries, lists, numpy arrays containing numeric
        data, numbers and strings.

        f: A path to the file to save the data in.

        name: The name to save the data under

        overwrite: Overwrites existing file if it exists

    Raises:
        ValueError: If o contains objects of an unsupported type.
    """

    if overwrite and os.path.exists(f):
        os.remove(f)

    def _recursive_save(f_h, o, group, key):
        if isinstance(o, np.ndarray):
            obj = f_h.create_dataset(group, data=o)
            obj.attrs['type'] = HDF5_TYPES['nparray']
        elif isinstance(o, str):
            obj = f_h.create_dataset(group, data=o, dtype=h5py.string_dtype())
            obj.attrs['type'] = HDF5_TYPES['str']
        elif isinstance(o, (bool, int, float, np.integer, np.floating)):
            obj = f_h.create_dataset(group, data=o)
            obj.attrs['type'] = HDF5_TYPES['scalar']
        elif isinstance(o, list):
            obj = f_h.create_group(group)
            obj.attrs['type'] = HDF5_TYPES['list']
            for v_i, v in enumerate(o):
                _recursive_save(f_h, v, group + '/list_' + str(v_i), v_i)
        elif isinstance(o, dict):
            obj = f_h.create_group(group)
            obj.attrs['type'] = HDF5_TYPES['dict']
            for k in o.keys():
                _recursive_save(f_h, o[k], group + '/' + str(k), str(k))
        else:
            raise(ValueError('Unable to save objects of type ' + str(type(o)) + '.'))
        obj.attrs['name'] = key

    with h5py.File(f, 'a') as f_h:
        _recursive_save(f_h, o, name, name)


def load_structured_hdf5(f: pathlib.Path) -> Union[np.ndarray, list, dict, int, float, str]:
    """ Loads data saved by save_structured_hdf5.

    Args:
        f: A path to the file with the saved data in it.

    Returns:
        o: The data saved under the first name in the file.

    Raises:
        ValueError: If the file contains an object of unrecognized type.
    """

    def _recursive_load(obj):
        obj_type = obj.attrs['type']
        if obj_type == HDF5_TYPES['nparray']:
            return obj[:]
        elif obj_type == HDF5_TYPES['scalar']:
            return obj[()].item()
        elif obj_type == HDF5_TYPES['str']:
            vl = obj[()]
            return vl.decode() if isinstance(vl, bytes) else str(vl)
        elif obj_type == HDF5_TYPES['list']:
            entries = {int(obj[k].attrs['name']): _recursive_load(obj[k]) for k in obj.keys()}
            return [entries[i] for i in range(len(entries))]
        elif obj_type == HDF5_TYPES['dict']:
            return {str(obj[k].attrs['name']): _recursive_load(obj[k]) for k in obj.keys()}
        else:
            raise(ValueError('Unrecogonized type: ' + str(obj_type)))

    with h5py.File(f, 'r') as f_h:
        top_grp = list(f_h.keys())[0]
        return _recursive_load(f_h[top_grp])
